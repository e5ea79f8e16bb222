#pragma once

#include "tg/types.hpp"

namespace tg {

/// Coordinate chart with an exponential map: flat R^n (exact translation)
/// or a circle of circumference L whose points live in [0, L).
///
/// The center point is the base of the dilation flows and of field
/// rescaling; it defaults to the origin.
class Chart {
 public:
  static Chart flat(int dimension);
  static Chart flat(Vector center);
  static Chart circle(double circumference, double center = 0.0);

  int dimension() const { return static_cast<int>(center_.size()); }
  bool is_circle() const { return circle_; }
  double circumference() const;  // circle charts only
  const Vector& center() const { return center_; }

  /// Circle: reduce each coordinate into [0, L). Flat: identity.
  Vector wrap(Vector x) const;

  /// exp_x(V): flat x+V, circle wrap(x+V).
  Vector exp_map(const Vector& x, const Vector& v) const;

  /// log_x(y): the vector V with exp_x(V) = y; circle differences are taken
  /// along the shortest arc, ties at L/2 resolve to -L/2.
  Vector log_map(const Vector& x, const Vector& y) const;

  /// Chord midpoint. On the circle the rule is symmetric in (x, y) and
  /// total: sort the two wrapped coordinates, walk half the shorter arc;
  /// antipodal pairs use the arc running upward from the smaller coordinate.
  Vector midpoint(const Vector& x, const Vector& y) const;

  double distance(const Vector& x, const Vector& y) const;

 private:
  Chart(bool circle, double circumference, Vector center);

  bool circle_;
  double circumference_;
  Vector center_;
};

}  // namespace tg
