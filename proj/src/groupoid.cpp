#include "tg/groupoid.hpp"

#include <cmath>
#include <sstream>

#include "tg/error.hpp"
#include "tg/format.hpp"

namespace tg {

Tangent make_tangent(Vector x, Vector v) {
  if (x.size() != v.size() || x.size() == 0)
    throw Error(Errc::DimensionMismatch, "tangent point and vector dimensions differ");
  return Tangent{std::move(x), std::move(v)};
}

Secant make_secant(Vector x, Vector y, double eps) {
  if (x.size() != y.size() || x.size() == 0)
    throw Error(Errc::DimensionMismatch, "secant endpoint dimensions differ");
  if (!(eps > 0.0 && eps < 1.0))
    throw Error(Errc::EpsilonOutOfRange, "secant eps must lie in (0, 1)");
  return Secant{std::move(x), std::move(y), eps};
}

const Secant& as_secant(const GroupoidElement& g) {
  if (!is_secant(g)) throw Error(Errc::InvalidArgument, "element is not a secant");
  return std::get<Secant>(g);
}

const Tangent& as_tangent(const GroupoidElement& g) {
  if (!is_tangent(g)) throw Error(Errc::InvalidArgument, "element is not a tangent");
  return std::get<Tangent>(g);
}

int element_dim(const GroupoidElement& g) {
  return is_secant(g) ? static_cast<int>(std::get<Secant>(g).x.size())
                      : static_cast<int>(std::get<Tangent>(g).x.size());
}

double element_eps(const GroupoidElement& g) {
  return is_secant(g) ? std::get<Secant>(g).eps : 0.0;
}

BaseUnit range(const GroupoidElement& g) {
  if (is_secant(g)) {
    const Secant& s = std::get<Secant>(g);
    return BaseUnit{s.y, s.eps};
  }
  return BaseUnit{std::get<Tangent>(g).x, 0.0};
}

BaseUnit source(const GroupoidElement& g) {
  if (is_secant(g)) {
    const Secant& s = std::get<Secant>(g);
    return BaseUnit{s.x, s.eps};
  }
  return BaseUnit{std::get<Tangent>(g).x, 0.0};
}

GroupoidElement unit(const Vector& x, double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw Error(Errc::EpsilonOutOfRange, "unit eps must lie in [0, 1)");
  if (eps == 0.0) return Tangent{x, Vector::Zero(x.size())};
  return Secant{x, x, eps};
}

GroupoidElement compose(const GroupoidElement& g1, const GroupoidElement& g2, double tol) {
  if (element_dim(g1) != element_dim(g2))
    throw Error(Errc::DimensionMismatch, "cannot compose elements of different dimension");
  if (is_secant(g1) != is_secant(g2))
    throw Error(Errc::MixedEpsilon, "cannot compose across the eps = 0 boundary");
  if (is_secant(g1)) {
    const Secant& a = std::get<Secant>(g1);
    const Secant& b = std::get<Secant>(g2);
    if (std::abs(a.eps - b.eps) > tol)
      throw Error(Errc::MixedEpsilon, "secant eps values differ beyond tolerance");
    if ((a.x - b.y).norm() > tol)
      throw Error(Errc::NotComposable, "source of the first factor is not the range of the second");
    return Secant{b.x, a.y, a.eps};
  }
  const Tangent& a = std::get<Tangent>(g1);
  const Tangent& b = std::get<Tangent>(g2);
  if ((a.x - b.x).norm() > tol)
    throw Error(Errc::NotComposable, "tangent base points differ");
  return Tangent{a.x, a.v + b.v};
}

GroupoidElement inverse(const GroupoidElement& g) {
  if (is_secant(g)) {
    const Secant& s = std::get<Secant>(g);
    return Secant{s.y, s.x, s.eps};
  }
  const Tangent& t = std::get<Tangent>(g);
  return Tangent{t.x, -t.v};
}

double pair(const GroupoidElement& g, const ScalarField& f) {
  if (element_dim(g) != f.dimension())
    throw Error(Errc::DimensionMismatch, "element and field dimensions differ");
  if (is_secant(g)) {
    const Secant& s = std::get<Secant>(g);
    return (eval(f, s.x) - eval(f, s.y)) / s.eps;
  }
  const Tangent& t = std::get<Tangent>(g);
  return directional_derivative(f, t.x, t.v);
}

double braided_leibniz_defect(const GroupoidElement& g, const ScalarField& f,
                              const ScalarField& h) {
  ScalarField fh = f * h;
  const Vector& x = is_secant(g) ? std::get<Secant>(g).x : std::get<Tangent>(g).x;
  const Vector& y = is_secant(g) ? std::get<Secant>(g).y : std::get<Tangent>(g).x;
  return pair(g, fh) - eval(f, x) * pair(g, h) - eval(h, y) * pair(g, f);
}

double coordinate_quotient_defect(const Secant& g, const ScalarField& f) {
  if (g.x.size() != 1 || f.dimension() != 1)
    throw Error(Errc::DimensionMismatch, "coordinate form is one-dimensional");
  if (g.x[0] == g.y[0])
    throw Error(Errc::DegenerateSecant, "coordinate quotient needs x != y");
  ScalarField phi(1, Expr::coord(0));
  double quotient = (eval(f, g.x) - eval(f, g.y)) / (g.x[0] - g.y[0]);
  GroupoidElement e = g;
  return pair(e, f) - quotient * pair(e, phi);
}

bool curve_member(const Curve& c, const GroupoidElement& g, const Chart& chart, double tol) {
  if (c.dimension() != element_dim(g) || chart.dimension() != c.dimension())
    throw Error(Errc::DimensionMismatch, "curve, element and chart dimensions differ");
  Vector c0 = chart.wrap(eval_curve(c, 0.0));
  if (is_secant(g)) {
    const Secant& s = std::get<Secant>(g);
    if (chart.distance(c0, chart.wrap(s.x)) > tol) return false;
    Vector ce = chart.wrap(eval_curve(c, s.eps));
    return chart.distance(ce, chart.wrap(s.y)) <= tol;
  }
  const Tangent& t = std::get<Tangent>(g);
  if (chart.distance(c0, chart.wrap(t.x)) > tol) return false;
  // difference quotients on eps = 2^-k, Richardson-extrapolated to kill the
  // O(eps) term
  Vector prev;
  Vector extrapolated;
  for (int k = 4; k <= 12; ++k) {
    double eps = std::ldexp(1.0, -k);
    Vector q = chart.log_map(c0, chart.wrap(eval_curve(c, eps))) / eps;
    if (k > 4) extrapolated = 2.0 * q - prev;
    prev = q;
  }
  return (extrapolated - t.v).norm() <= tol;
}

SecantSequence::SecantSequence(std::vector<Secant> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) {
      if (terms_[i].x.size() != terms_[0].x.size())
        throw Error(Errc::DimensionMismatch, "sequence terms have mixed dimensions");
      if (!(terms_[i].eps < terms_[i - 1].eps))
        throw Error(Errc::InvalidArgument, "sequence eps must be strictly decreasing");
    }
  }
}

SequenceLimit sequence_limit(const SecantSequence& s, const Chart& chart, double tol) {
  if (s.size() < 4)
    throw Error(Errc::InvalidArgument, "sequence_limit needs at least 4 terms");
  const std::size_t n = s.size();
  Vector q[3];
  for (int i = 0; i < 3; ++i) {
    const Secant& term = s[n - 3 + i];
    q[i] = chart.log_map(chart.wrap(term.y), chart.wrap(term.x)) / term.eps;
  }
  double quotient_spread = std::max({(q[0] - q[1]).norm(), (q[1] - q[2]).norm(),
                                     (q[0] - q[2]).norm()});
  // endpoint spread over the last three terms
  double base_spread = 0.0;
  std::vector<Vector> pts;
  for (int i = 0; i < 3; ++i) {
    pts.push_back(chart.wrap(s[n - 3 + i].x));
    pts.push_back(chart.wrap(s[n - 3 + i].y));
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      base_spread = std::max(base_spread, chart.distance(pts[i], pts[j]));
  double base_tol = std::sqrt(tol);

  if (quotient_spread <= tol && base_spread <= base_tol) {
    const Secant& last = s[n - 1];
    Vector x = chart.midpoint(chart.wrap(last.x), chart.wrap(last.y));
    return SequenceLimit{Tangent{std::move(x), q[2]}, std::nullopt};
  }
  if (q[2].norm() > q[1].norm() && q[1].norm() > q[0].norm())
    return SequenceLimit{std::nullopt, DivergenceReason::QuotientDiverges};
  if (base_spread > base_tol)
    return SequenceLimit{std::nullopt, DivergenceReason::BasePointsDiverge};
  return SequenceLimit{std::nullopt, DivergenceReason::QuotientOscillates};
}

// ---------------------------------------------------------------------------
// Line format

namespace {

void append_coords(std::string& out, const Vector& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

Vector parse_coords(std::string_view text) {
  auto parts = split(text, ',');
  Vector v(static_cast<long>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<long>(i)] = parse_double(trim(parts[i]));
  return v;
}

}  // namespace

std::string format_element(const GroupoidElement& g) {
  std::string out;
  if (is_tangent(g)) {
    const Tangent& t = std::get<Tangent>(g);
    out += "T ";
    append_coords(out, t.x);
    out += " | ";
    append_coords(out, t.v);
  } else {
    const Secant& s = std::get<Secant>(g);
    out += "S ";
    append_coords(out, s.x);
    out += " | ";
    append_coords(out, s.y);
    out += " | ";
    out += format_double(s.eps);
  }
  return out;
}

GroupoidElement parse_element(std::string_view text) {
  std::string_view body = trim(text);
  if (body.empty()) throw Error(Errc::SyntaxError, "empty element");
  char tag = body.front();
  body.remove_prefix(1);
  auto parts = split(body, '|');
  if (tag == 'T') {
    if (parts.size() != 2)
      throw Error(Errc::SyntaxError, "tangent element needs 'T x.. | v..'");
    return make_tangent(parse_coords(trim(parts[0])), parse_coords(trim(parts[1])));
  }
  if (tag == 'S') {
    if (parts.size() != 3)
      throw Error(Errc::SyntaxError, "secant element needs 'S x.. | y.. | eps'");
    return make_secant(parse_coords(trim(parts[0])), parse_coords(trim(parts[1])),
                       parse_double(trim(parts[2])));
  }
  throw Error(Errc::SyntaxError, "element must start with 'T' or 'S'");
}

}  // namespace tg
