#include "tg/chart.hpp"

#include <cmath>

#include "tg/error.hpp"

namespace tg {

Chart::Chart(bool circle, double circumference, Vector center)
    : circle_(circle), circumference_(circumference), center_(std::move(center)) {}

Chart Chart::flat(int dimension) {
  if (dimension <= 0) throw Error(Errc::InvalidArgument, "dimension must be positive");
  return Chart(false, 0.0, Vector::Zero(dimension));
}

Chart Chart::flat(Vector center) {
  if (center.size() == 0) throw Error(Errc::InvalidArgument, "dimension must be positive");
  return Chart(false, 0.0, std::move(center));
}

Chart Chart::circle(double circumference, double center) {
  if (!(circumference > 0)) throw Error(Errc::InvalidArgument, "circumference must be positive");
  Vector c(1);
  c[0] = center;
  Chart chart(true, circumference, std::move(c));
  chart.center_ = chart.wrap(chart.center_);
  return chart;
}

double Chart::circumference() const {
  if (!circle_) throw Error(Errc::InvalidArgument, "flat charts have no circumference");
  return circumference_;
}

namespace {

double wrap_scalar(double x, double L) {
  double w = x - L * std::floor(x / L);
  if (w >= L) w -= L;  // guard against floor rounding at the seam
  if (w < 0) w += L;
  return w;
}

}  // namespace

Vector Chart::wrap(Vector x) const {
  if (!circle_) return x;
  x[0] = wrap_scalar(x[0], circumference_);
  return x;
}

Vector Chart::exp_map(const Vector& x, const Vector& v) const {
  if (x.size() != dimension() || v.size() != dimension())
    throw Error(Errc::DimensionMismatch, "exp_map dimension mismatch");
  return wrap(x + v);
}

Vector Chart::log_map(const Vector& x, const Vector& y) const {
  if (x.size() != dimension() || y.size() != dimension())
    throw Error(Errc::DimensionMismatch, "log_map dimension mismatch");
  if (!circle_) return y - x;
  double L = circumference_;
  double d = wrap_scalar(y[0] - x[0], L);
  if (d >= L / 2) d -= L;  // shortest arc, ties land on -L/2
  Vector out(1);
  out[0] = d;
  return out;
}

Vector Chart::midpoint(const Vector& x, const Vector& y) const {
  if (!circle_) return 0.5 * (x + y);
  double L = circumference_;
  double a = wrap_scalar(x[0], L);
  double b = wrap_scalar(y[0], L);
  if (a > b) std::swap(a, b);
  double d = b - a;
  Vector out(1);
  // antipodal pairs (d == L/2) take the first branch: the arc running
  // upward from the smaller coordinate
  out[0] = (d <= L / 2) ? (a + d / 2) : wrap_scalar(b + (L - d) / 2, L);
  return out;
}

double Chart::distance(const Vector& x, const Vector& y) const {
  return log_map(x, y).norm();
}

}  // namespace tg
