#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tg/chart.hpp"
#include "tg/expr.hpp"
#include "tg/types.hpp"

namespace tg {

/// A point [x, X] of TM: the distribution f -> directional derivative of f
/// at x along v.
struct Tangent {
  Vector x;
  Vector v;
};

/// A point [x, y, eps] of SM: the distribution f -> (f(x) - f(y)) / eps.
/// eps lies in (0, 1); the tangent part is the eps = 0 boundary.
struct Secant {
  Vector x;
  Vector y;
  double eps;
};

using GroupoidElement = std::variant<Tangent, Secant>;

Tangent make_tangent(Vector x, Vector v);
Secant make_secant(Vector x, Vector y, double eps);

inline bool is_secant(const GroupoidElement& g) { return std::holds_alternative<Secant>(g); }
inline bool is_tangent(const GroupoidElement& g) { return std::holds_alternative<Tangent>(g); }
const Secant& as_secant(const GroupoidElement& g);
const Tangent& as_tangent(const GroupoidElement& g);

int element_dim(const GroupoidElement& g);
double element_eps(const GroupoidElement& g);  // 0 for tangents

/// Image of the range/source maps in M x R.
struct BaseUnit {
  Vector point;
  double eps;
};

// r([x,y,eps]) = (y,eps), s([x,y,eps]) = (x,eps); both collapse to (x,0) on TM.
BaseUnit range(const GroupoidElement& g);
BaseUnit source(const GroupoidElement& g);

/// Unit embedding of M x R: eps = 0 gives [x, 0], eps > 0 gives [x, x, eps].
GroupoidElement unit(const Vector& x, double eps);
inline GroupoidElement unit(const BaseUnit& b) { return unit(b.point, b.eps); }

inline constexpr double kComposeTol = 1e-9;

/// Groupoid product, defined when source(g1) matches range(g2) within tol:
/// [x,y,eps] o [w,x,eps] = [w,y,eps] and [x,X] o [x,Y] = [x,X+Y].
/// The result reuses the operand slots verbatim, so unit and associativity
/// laws hold bitwise.
GroupoidElement compose(const GroupoidElement& g1, const GroupoidElement& g2,
                        double tol = kComposeTol);

GroupoidElement inverse(const GroupoidElement& g);

/// The distribution pairing <g | f>.
double pair(const GroupoidElement& g, const ScalarField& f);

/// pair(g, f*h) - f(x) pair(g, h) - h(y) pair(g, f); zero identically
/// (y = x for tangents, which is the classical Leibniz rule).
double braided_leibniz_defect(const GroupoidElement& g, const ScalarField& f,
                              const ScalarField& h);

/// 1-D coordinate form: pair(g,f) - [(f(x)-f(y))/(x-y)] pair(g, x0); zero
/// identically. Throws DegenerateSecant when x == y.
double coordinate_quotient_defect(const Secant& g, const ScalarField& f);

/// Membership of a curve in the class an element represents. Secants ask
/// c(0) = x and c(eps) = y within tol; tangents Richardson-extrapolate the
/// chart difference quotient on eps = 2^-k, k = 4..12.
bool curve_member(const Curve& c, const GroupoidElement& g, const Chart& chart, double tol);

/// Secant terms with strictly decreasing eps > 0.
class SecantSequence {
 public:
  explicit SecantSequence(std::vector<Secant> terms);  // validates ordering

  const std::vector<Secant>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const Secant& operator[](std::size_t i) const { return terms_[i]; }

 private:
  std::vector<Secant> terms_;
};

enum class DivergenceReason { BasePointsDiverge, QuotientDiverges, QuotientOscillates };

struct SequenceLimit {
  std::optional<Tangent> tangent;           // set iff converged
  std::optional<DivergenceReason> reason;   // set iff divergent
  bool converged() const { return tangent.has_value(); }
};

/// Boundary pasting: the sequence converges to [x, X] when the endpoints
/// merge and the chart difference quotients (phi x_n - phi y_n)/eps_n settle
/// (last-three-term spread <= tol). Needs at least 4 terms.
SequenceLimit sequence_limit(const SecantSequence& s, const Chart& chart, double tol);

// Line format: "T x0,..,xn-1 | v0,..,vn-1" and "S x.. | y.. | eps".
// Round-trips exactly (shortest round-trip number printing).
std::string format_element(const GroupoidElement& g);
GroupoidElement parse_element(std::string_view text);

}  // namespace tg
