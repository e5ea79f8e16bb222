#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tg/expr.hpp"
#include "tg/rng.hpp"
#include "tg/types.hpp"

namespace tgtest {

// Independent finite-difference oracle (central differences).
inline double fd_partial(const tg::ScalarField& f, const tg::Vector& x, int i,
                         double h = 1e-5) {
  tg::Vector hi = x, lo = x;
  hi[i] += h;
  lo[i] -= h;
  return (tg::eval(f, hi) - tg::eval(f, lo)) / (2 * h);
}

inline double fd_directional(const tg::ScalarField& f, const tg::Vector& x, const tg::Vector& v,
                             double h = 1e-5) {
  double acc = 0;
  for (int i = 0; i < x.size(); ++i) {
    tg::Vector hi = x, lo = x;
    hi[i] += h;
    lo[i] -= h;
    acc += v[i] * (tg::eval(f, hi) - tg::eval(f, lo)) / (2 * h);
  }
  return acc;
}

// High-precision series oracle for exp.
inline long double series_exp(long double x) {
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 60; ++k) {
    term *= x / k;
    sum += term;
    if (std::fabs((double)term) < 1e-25) break;
  }
  return sum;
}

inline bool exact_equal(const tg::Vector& a, const tg::Vector& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// Random raw AST (structural factories only) for printer/parser round trips.
inline tg::Expr random_tree(tg::Rng& rng, int dimension, int depth) {
  using tg::Expr;
  if (depth <= 0 || rng.uniform01() < 0.25) {
    if (rng.coin()) {
      double mantissa = rng.uniform(-10.0, 10.0);
      int scale = rng.uniform_int(-6, 6);
      return Expr::constant(mantissa * std::pow(10.0, scale));
    }
    return Expr::coord(rng.uniform_int(0, dimension - 1));
  }
  switch (rng.uniform_int(0, 5)) {
    case 0:
      return Expr::sum(random_tree(rng, dimension, depth - 1), random_tree(rng, dimension, depth - 1));
    case 1:
      return Expr::product(random_tree(rng, dimension, depth - 1),
                           random_tree(rng, dimension, depth - 1));
    case 2:
      return Expr::pow(random_tree(rng, dimension, depth - 1), rng.uniform_int(0, 6));
    case 3:
      return Expr::sin(random_tree(rng, dimension, depth - 1));
    case 4:
      return Expr::cos(random_tree(rng, dimension, depth - 1));
    default:
      return Expr::exp(random_tree(rng, dimension, depth - 1));
  }
}

// Random smooth composition (trig/exp over small linear arguments), safe to
// differentiate and evaluate on [-2, 2]^n.
inline tg::Expr random_smooth(tg::Rng& rng, int dimension, int depth) {
  using tg::Expr;
  if (depth <= 0 || rng.uniform01() < 0.3) {
    Expr lin = Expr::constant(rng.uniform(-0.5, 0.5));
    for (int i = 0; i < dimension; ++i)
      lin = lin + Expr::constant(rng.uniform(-0.7, 0.7)) * Expr::coord(i);
    return lin;
  }
  switch (rng.uniform_int(0, 4)) {
    case 0:
      return random_smooth(rng, dimension, depth - 1) + random_smooth(rng, dimension, depth - 1);
    case 1:
      return random_smooth(rng, dimension, depth - 1) * random_smooth(rng, dimension, depth - 1);
    case 2:
      return sin(random_smooth(rng, dimension, depth - 1));
    case 3:
      return cos(random_smooth(rng, dimension, depth - 1));
    default:
      return exp(Expr::constant(rng.uniform(-0.5, 0.5)) * random_smooth(rng, dimension, depth - 1));
  }
}

inline std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace tgtest
