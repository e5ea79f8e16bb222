#include "tg/qcalc.hpp"

#include <cmath>

#include "tg/error.hpp"

namespace tg {

DeformationParam make_lambda_shift(double lambda) {
  if (lambda == 0.0) throw Error(Errc::ZeroDeformation, "lambda must be nonzero");
  return LambdaShift{lambda};
}

DeformationParam make_jackson(double q) {
  if (!(q > 0.0)) throw Error(Errc::InvalidArgument, "q must be positive");
  if (q == 1.0) throw Error(Errc::DegenerateQ, "q = 1 is the undeformed limit");
  return JacksonQ{q};
}

static void require_one_dim(const ScalarField& f) {
  if (f.dimension() != 1)
    throw Error(Errc::DimensionMismatch, "deformed derivatives are one-dimensional");
}

double lambda_derivative(const ScalarField& f, double x, double lambda) {
  require_one_dim(f);
  if (lambda == 0.0)
    throw Error(Errc::ZeroDeformation, "lambda = 0; use the directional derivative");
  // same arithmetic as pair([x+lambda, x, lambda], f)
  return (eval(f, vec1(x + lambda)) - eval(f, vec1(x))) / lambda;
}

double jackson_derivative(const ScalarField& f, double x, double q) {
  require_one_dim(f);
  if (x == 0.0) throw Error(Errc::ZeroPoint, "Jackson derivative is undefined at x = 0");
  if (q == 1.0) throw Error(Errc::DegenerateQ, "q = 1 is the undeformed limit");
  return (eval(f, vec1(q * x)) - eval(f, vec1(x))) / ((q - 1.0) * x);
}

double braided_leibniz_defect_deformed(const DeformationParam& d, const ScalarField& f,
                                       const ScalarField& g, double x) {
  require_one_dim(f);
  require_one_dim(g);
  ScalarField fg = f * g;
  if (std::holds_alternative<LambdaShift>(d)) {
    double lambda = std::get<LambdaShift>(d).lambda;
    double shifted = x + lambda;
    return lambda_derivative(fg, x, lambda) -
           eval(f, vec1(shifted)) * lambda_derivative(g, x, lambda) -
           eval(g, vec1(x)) * lambda_derivative(f, x, lambda);
  }
  double q = std::get<JacksonQ>(d).q;
  double shifted = q * x;
  return jackson_derivative(fg, x, q) - eval(f, vec1(shifted)) * jackson_derivative(g, x, q) -
         eval(g, vec1(x)) * jackson_derivative(f, x, q);
}

CFamily::CFamily(ScalarField generator) : generator_(std::move(generator)) {
  require_one_dim(generator_);
}

CFamily CFamily::exponential(double lambda) {
  if (lambda == 0.0) throw Error(Errc::ZeroDeformation, "lambda must be nonzero");
  Expr p = Expr::coord(0);
  Expr body = Expr::constant(1.0 / (lambda * lambda)) * exp(Expr::constant(lambda) * p);
  return CFamily(ScalarField(1, body));
}

CFamily CFamily::classical() {
  return CFamily(ScalarField(1, Expr::constant(0.5) * pow(Expr::coord(0), 2)));
}

const ScalarField& CFamily::derivative(int order) const {
  if (order < 0) throw Error(Errc::InvalidArgument, "derivative order must be nonnegative");
  if (derivatives_.empty()) derivatives_.push_back(generator_);
  while (static_cast<int>(derivatives_.size()) <= order) {
    derivatives_.push_back(differentiate(derivatives_.back(), 0));
  }
  return derivatives_[static_cast<std::size_t>(order)];
}

ScalarField c_family_basis(const CFamily& c, int order) {
  if (order < 1) throw Error(Errc::InvalidArgument, "basis order starts at 1");
  const ScalarField& d = c.derivative(order);
  double at_zero = eval(d, vec1(0.0));
  return ScalarField(1, d.body() + Expr::constant(-at_zero));
}

bool annihilator_member(const ScalarField& f, double lambda, double tol) {
  require_one_dim(f);
  if (std::abs(eval(f, vec1(0.0))) > tol) return false;
  return std::abs(lambda_derivative(f, 0.0, lambda)) <= tol;
}

}  // namespace tg
