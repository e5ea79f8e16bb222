#include "tg/rng.hpp"

namespace tg {

namespace {

// append all monomial exponent tuples of total degree <= budget, fixed order
void enumerate_monomials(int dimension, int budget, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == dimension) {
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= budget; ++e) {
    current.push_back(e);
    enumerate_monomials(dimension, budget - e, current, out);
    current.pop_back();
  }
}

}  // namespace

ScalarField random_polynomial(Rng& rng, int dimension, int max_degree, double coeff_lo,
                              double coeff_hi) {
  std::vector<std::vector<int>> monomials;
  std::vector<int> scratch;
  enumerate_monomials(dimension, max_degree, scratch, monomials);

  Expr body = Expr::constant(0.0);
  for (const auto& exponents : monomials) {
    double c = rng.uniform(coeff_lo, coeff_hi);
    Expr term = Expr::constant(c);
    for (int i = 0; i < dimension; ++i) {
      if (exponents[i] > 0) term = term * pow(Expr::coord(i), exponents[i]);
    }
    body = body + term;
  }
  return ScalarField(dimension, body);
}

}  // namespace tg
