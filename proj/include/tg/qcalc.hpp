#pragma once

#include <variant>
#include <vector>

#include "tg/expr.hpp"

namespace tg {

struct LambdaShift {
  double lambda;  // != 0
};

struct JacksonQ {
  double q;  // > 0, != 1
};

using DeformationParam = std::variant<LambdaShift, JacksonQ>;

DeformationParam make_lambda_shift(double lambda);
DeformationParam make_jackson(double q);

/// Shift derivative D_lambda f(x) = (f(x + lambda) - f(x)) / lambda.
/// Computes the same arithmetic as pair([x+lambda, x, lambda], f).
double lambda_derivative(const ScalarField& f, double x, double lambda);

/// Jackson derivative D_q f(x) = (f(qx) - f(x)) / ((q - 1) x).
double jackson_derivative(const ScalarField& f, double x, double q);

/// D(fg)(x) - f(shifted) Dg(x) - g(x) Df(x), the braided Leibniz rule with
/// the shifted point x + lambda (resp. qx); zero identically.
double braided_leibniz_defect_deformed(const DeformationParam& d, const ScalarField& f,
                                       const ScalarField& g, double x);

/// Generator c(p) of a one-dimensional deformed tangent space, with cached
/// symbolic derivatives.
class CFamily {
 public:
  explicit CFamily(ScalarField generator);  // one-variable

  /// c_lambda(p) = lambda^-2 exp(lambda p).
  static CFamily exponential(double lambda);
  /// c(p) = p^2 / 2, the undeformed case.
  static CFamily classical();

  const ScalarField& generator() const { return generator_; }
  const ScalarField& derivative(int order) const;  // order >= 0, cached

 private:
  ScalarField generator_;
  mutable std::vector<ScalarField> derivatives_;
};

/// Basis element p_n(p) = c^(n)(p) - c^(n)(0), n >= 1, built symbolically.
ScalarField c_family_basis(const CFamily& c, int order);

/// Membership in the submodule killed when forming the dual space:
/// f(0) = 0 and |D_lambda f(0)| <= tol.
bool annihilator_member(const ScalarField& f, double lambda, double tol);

}  // namespace tg
