#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tg/types.hpp"

namespace tg {

enum class ExprKind { Constant, Coord, Sum, Product, Pow, Sin, Cos, Exp };

/// Immutable expression tree over coordinates x0, x1, ...
///
/// Node kinds: finite real constants, coordinates, binary sums and products,
/// nonnegative integer powers, and sin/cos/exp. There is no division node,
/// so evaluation is total on finite inputs.
///
/// The static factories build nodes structurally (no rewriting); the
/// overloaded operators below fold exact constant arithmetic and the
/// 0/1 identities, which keeps symbolic derivatives compact.
class Expr {
 public:
  static Expr constant(double value);  // rejects NaN/inf
  static Expr coord(int index);        // index >= 0
  static Expr sum(Expr lhs, Expr rhs);
  static Expr product(Expr lhs, Expr rhs);
  static Expr pow(Expr base, int exponent);  // exponent >= 0
  static Expr sin(Expr arg);
  static Expr cos(Expr arg);
  static Expr exp(Expr arg);

  ExprKind kind() const;
  double constant_value() const;  // Constant only
  int coord_index() const;        // Coord only
  int exponent() const;           // Pow only
  int child_count() const;
  Expr child(int i) const;  // 0-based; Sum/Product have 2, unary 1

  /// Largest coordinate index referenced, or -1 for constant expressions.
  int max_coord_index() const;

  bool operator==(const Expr& other) const;  // structural equality
  bool operator!=(const Expr& other) const { return !(*this == other); }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
  friend double eval(const Expr&, const Vector&);
  friend struct ExprAccess;
};

// Simplifying algebra: exact constant folding plus the 0/1 identities.
// Folding is evaluation-equivalent (the folded constant is the same double
// the unfolded tree would produce).
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& arg);
Expr cos(const Expr& arg);
Expr exp(const Expr& arg);

double eval(const Expr& e, const Vector& x);
Expr derivative(const Expr& e, int coord);
Expr substitute(const Expr& e, const std::vector<Expr>& replacement_by_coord);

std::string to_string(const Expr& e);

/// Parses the infix grammar (see README); coordinate indices must be < dimension.
/// Throws Error(SyntaxError|CoordOutOfRange) with a byte offset.
Expr parse_expr(std::string_view text, int dimension);

/// A test function f in A = C^1(M): an expression plus its declared dimension.
class ScalarField {
 public:
  ScalarField(int dimension, Expr body);  // validates coordinate indices

  int dimension() const { return dimension_; }
  const Expr& body() const { return body_; }

 private:
  int dimension_;
  Expr body_;
};

ScalarField parse_field(std::string_view text, int dimension);
double eval(const ScalarField& f, const Vector& x);

/// Exact symbolic partial derivative with respect to coordinate i.
ScalarField differentiate(const ScalarField& f, int i);

/// Sum_i v_i (d_i f)(x) with symbolic partials.
double directional_derivative(const ScalarField& f, const Vector& x, const Vector& v);

/// Pointwise product; both factors must share a dimension.
ScalarField operator*(const ScalarField& f, const ScalarField& g);

/// A curve R -> R^n: one single-variable expression (in x0 = t) per component.
class Curve {
 public:
  Curve(int dimension, std::vector<Expr> components);

  int dimension() const { return dimension_; }
  const std::vector<Expr>& components() const { return components_; }

 private:
  int dimension_;
  std::vector<Expr> components_;
};

Vector eval_curve(const Curve& c, double t);

}  // namespace tg
