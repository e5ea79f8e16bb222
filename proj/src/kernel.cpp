#include "tg/kernel.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>

#include "tg/chart.hpp"
#include "tg/error.hpp"
#include "tg/format.hpp"

namespace tg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

GridSpec GridSpec::make(int sites, double circumference) {
  if (sites < 8 || (sites & (sites - 1)) != 0)
    throw Error(Errc::InvalidArgument, "grid size must be a power of two >= 8");
  if (!(circumference > 0))
    throw Error(Errc::InvalidArgument, "circumference must be positive");
  return GridSpec(sites, circumference);
}

double GridSpec::freq(int k) const { return kTwoPi * k / circumference_; }

KernelSlice identity_kernel(const GridSpec& grid, double eps) {
  ComplexMatrix m = ComplexMatrix::Zero(grid.sites(), grid.sites());
  const double inv_dx = 1.0 / grid.dx();
  for (int i = 0; i < grid.sites(); ++i) m(i, i) = inv_dx;
  return KernelSlice{grid, eps, std::move(m)};
}

KernelSlice diagonal_kernel(const GridSpec& grid, double eps, const ScalarField& f) {
  if (f.dimension() != 1)
    throw Error(Errc::DimensionMismatch, "diagonal kernels take a one-variable field");
  ComplexMatrix m = ComplexMatrix::Zero(grid.sites(), grid.sites());
  const double inv_dx = 1.0 / grid.dx();
  for (int i = 0; i < grid.sites(); ++i) m(i, i) = eval(f, vec1(grid.site(i))) * inv_dx;
  return KernelSlice{grid, eps, std::move(m)};
}

KernelSlice convolve(const KernelSlice& a, const KernelSlice& b) {
  if (!(a.grid == b.grid)) throw Error(Errc::GridMismatch, "kernel grids differ");
  if (a.eps != b.eps) throw Error(Errc::EpsilonMismatch, "kernel eps values differ");
  return KernelSlice{a.grid, a.eps, a.grid.dx() * (a.values * b.values)};
}

ComplexVector op_apply(const KernelSlice& k, const ComplexVector& psi) {
  if (psi.size() != k.grid.sites()) throw Error(Errc::GridMismatch, "state size differs from grid");
  return k.grid.dx() * (k.values * psi);
}

double kernel_sup_norm(const KernelSlice& k) {
  return k.grid.dx() * k.values.cwiseAbs().rowwise().sum().maxCoeff();
}

// ---------------------------------------------------------------------------
// TM slice functions

double fiber_site(const TangentSliceFn& a, int j) {
  return (j - a.grid.sites() / 2) * a.fiber_step;
}

TangentSliceFn tangent_convolve(const TangentSliceFn& a, const TangentSliceFn& b) {
  if (!(a.grid == b.grid) || a.fiber_step != b.fiber_step)
    throw Error(Errc::GridMismatch, "tangent slices live on different grids");
  const int n = a.grid.sites();
  ComplexMatrix out(n, n);
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) {
      Complex acc = 0.0;
      for (int j = 0; j < n; ++j) {
        int k = ((i - j + n / 2) % n + n) % n;  // fiber index of X_i - X_j
        acc += a.values(m, j) * b.values(m, k);
      }
      out(m, i) = a.fiber_step * acc;
    }
  }
  return TangentSliceFn{a.grid, a.fiber_step, std::move(out)};
}

ComplexMatrix fiber_fourier(const TangentSliceFn& a) {
  const int n = a.grid.sites();
  const double period = n * a.fiber_step;
  ComplexMatrix out(n, n);
  for (int m = 0; m < n; ++m) {
    for (int qi = 0; qi < n; ++qi) {
      double kappa = kTwoPi * (qi - n / 2) / period;
      Complex acc = 0.0;
      for (int j = 0; j < n; ++j) {
        double theta = -kappa * fiber_site(a, j);
        acc += a.values(m, j) * Complex(std::cos(theta), std::sin(theta));
      }
      out(m, qi) = a.fiber_step * acc;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quantization

namespace {

bool coord0_outside_trig(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return false;
    case ExprKind::Coord:
      return e.coord_index() == 0;
    case ExprKind::Sin:
    case ExprKind::Cos:
      return false;  // anything under a trig node is periodic-safe
    case ExprKind::Sum:
    case ExprKind::Product:
      return coord0_outside_trig(e.child(0)) || coord0_outside_trig(e.child(1));
    default:
      return coord0_outside_trig(e.child(0));
  }
}

}  // namespace

Observable::Observable(ScalarField field) : field_(std::move(field)) {
  if (field_.dimension() != 2)
    throw Error(Errc::DimensionMismatch, "observables are functions of (x, p)");
  if (coord0_outside_trig(field_.body()))
    throw Error(Errc::InvalidArgument,
                "position must enter observables through sin/cos (periodicity)");
}

double Observable::operator()(double x, double p) const { return eval(field_, vec2(x, p)); }

Observable parse_observable(std::string_view text) {
  return Observable(parse_field(text, 2));
}

KernelSlice quantize(const Observable& h, double eps, const GridSpec& grid) {
  if (!(eps > 0.0 && eps < 1.0))
    throw Error(Errc::EpsilonOutOfRange, "quantization scale must lie in (0, 1)");
  const int n = grid.sites();
  const double L = grid.circumference();
  Chart circle = Chart::circle(L);
  std::vector<double> mid(static_cast<std::size_t>(n) * n);
  for (int m = 0; m < n; ++m) {
    for (int j = 0; j < n; ++j) {
      mid[static_cast<std::size_t>(m) * n + j] =
          circle.midpoint(vec1(grid.site(m)), vec1(grid.site(j)))[0];
    }
  }
  std::vector<double> xi(static_cast<std::size_t>(n));
  for (int k = grid.freq_lo(); k < grid.freq_hi(); ++k)
    xi[static_cast<std::size_t>(k - grid.freq_lo())] = grid.freq(k);

  ComplexMatrix out(n, n);
  for (int m = 0; m < n; ++m) {
    for (int j = 0; j < n; ++j) {
      const double delta = grid.site(m) - grid.site(j);
      const double z = mid[static_cast<std::size_t>(m) * n + j];
      Complex acc = 0.0;
      for (double f : xi) {
        double theta = f * delta;
        acc += h(z, eps * f) * Complex(std::cos(theta), std::sin(theta));
      }
      out(m, j) = acc / L;
    }
  }
  return KernelSlice{grid, eps, std::move(out)};
}

double classical_limit_defect(const Observable& h1, const Observable& h2, double eps,
                              const GridSpec& grid) {
  KernelSlice a = quantize(h1, eps, grid);
  KernelSlice b = quantize(h2, eps, grid);
  KernelSlice product = quantize(Observable(h1.field() * h2.field()), eps, grid);
  ComplexMatrix defect = convolve(a, b).values - product.values;
  return kernel_sup_norm(KernelSlice{grid, eps, std::move(defect)});
}

Observable poisson_bracket(const Observable& h1, const Observable& h2) {
  Expr dx1 = derivative(h1.field().body(), 0);
  Expr dp1 = derivative(h1.field().body(), 1);
  Expr dx2 = derivative(h2.field().body(), 0);
  Expr dp2 = derivative(h2.field().body(), 1);
  return Observable(ScalarField(2, dx1 * dp2 - dp1 * dx2));
}

double moyal_defect(const Observable& h1, const Observable& h2, double eps,
                    const GridSpec& grid) {
  KernelSlice a = quantize(h1, eps, grid);
  KernelSlice b = quantize(h2, eps, grid);
  ComplexMatrix commutator = convolve(a, b).values - convolve(b, a).values;
  KernelSlice bracket = quantize(poisson_bracket(h1, h2), eps, grid);
  ComplexMatrix defect = Complex(0.0, -1.0 / eps) * commutator - bracket.values;
  return kernel_sup_norm(KernelSlice{grid, eps, std::move(defect)});
}

// ---------------------------------------------------------------------------
// Serialization

void write_kernel_csv(const KernelSlice& k, std::ostream& out) {
  out << "m,n,re,im\n";
  for (int m = 0; m < k.grid.sites(); ++m) {
    for (int n = 0; n < k.grid.sites(); ++n) {
      out << m << ',' << n << ',' << format_double(k.values(m, n).real()) << ','
          << format_double(k.values(m, n).imag()) << '\n';
    }
  }
}

void write_kernel_binary(const KernelSlice& k, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  const char magic[4] = {'T', 'G', 'K', 'R'};
  std::uint32_t n = static_cast<std::uint32_t>(k.grid.sites());
  double eps = k.eps;
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&eps), 8);
  for (int m = 0; m < k.grid.sites(); ++m) {
    for (int j = 0; j < k.grid.sites(); ++j) {
      double re = k.values(m, j).real();
      double im = k.values(m, j).imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
  }
  if (!out) throw Error(Errc::IoError, "short write to '" + path + "'");
}

KernelSlice read_kernel_binary(const std::string& path, double circumference) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  char magic[4];
  std::uint32_t n = 0;
  double eps = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&eps), 8);
  if (!in || std::memcmp(magic, "TGKR", 4) != 0)
    throw Error(Errc::IoError, "'" + path + "' is not a kernel file");
  GridSpec grid = GridSpec::make(static_cast<int>(n), circumference);
  ComplexMatrix values(grid.sites(), grid.sites());
  for (int m = 0; m < grid.sites(); ++m) {
    for (int j = 0; j < grid.sites(); ++j) {
      double re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      values(m, j) = Complex(re, im);
    }
  }
  if (!in) throw Error(Errc::IoError, "truncated kernel file '" + path + "'");
  return KernelSlice{grid, eps, std::move(values)};
}

}  // namespace tg
