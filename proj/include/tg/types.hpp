#pragma once

#include <complex>

#include <Eigen/Core>

namespace tg {

using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline Vector vec1(double x) {
  Vector v(1);
  v << x;
  return v;
}

inline Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

}  // namespace tg
