#pragma once

#include <iosfwd>
#include <string>

#include "tg/expr.hpp"
#include "tg/types.hpp"

namespace tg {

/// Periodic grid on a circle of circumference L with N sites (power of two,
/// >= 8): sites x_m = mL/N, frequencies xi_k = 2 pi k / L for k in [-N/2, N/2).
class GridSpec {
 public:
  static GridSpec make(int sites, double circumference);

  int sites() const { return sites_; }
  double circumference() const { return circumference_; }
  double dx() const { return circumference_ / sites_; }
  double site(int m) const { return m * circumference_ / sites_; }
  double freq(int k) const;
  int freq_lo() const { return -sites_ / 2; }
  int freq_hi() const { return sites_ / 2; }  // exclusive

  bool operator==(const GridSpec& other) const = default;

 private:
  GridSpec(int sites, double circumference) : sites_(sites), circumference_(circumference) {}
  int sites_;
  double circumference_;
};

/// A function on the fixed-eps slice of the groupoid: the kernel of an
/// operator on the grid. values(m, n) is the value on the element with
/// source x_n and range x_m, i.e. column = input site, row = output site.
struct KernelSlice {
  GridSpec grid;
  double eps;
  ComplexMatrix values;  // N x N
};

KernelSlice identity_kernel(const GridSpec& grid, double eps);
KernelSlice diagonal_kernel(const GridSpec& grid, double eps, const ScalarField& f);

/// Groupoid convolution at fixed eps: (a*b)(m,n) = dx * sum_r a(m,r) b(r,n).
KernelSlice convolve(const KernelSlice& a, const KernelSlice& b);

/// (k psi)(x_m) = dx * sum_n k(m,n) psi(x_n).
ComplexVector op_apply(const KernelSlice& k, const ComplexVector& psi);

/// dx-weighted max row sum (the operator sup norm for kernels).
double kernel_sup_norm(const KernelSlice& k);

/// A function on TM sampled on a position x fiber grid; the fiber is itself
/// periodic with spacing fiber_step (period = N * fiber_step), fiber sites
/// X_j = (j - N/2) * fiber_step.
struct TangentSliceFn {
  GridSpec grid;
  double fiber_step;
  ComplexMatrix values;  // N x N, row = position index, col = fiber index
};

double fiber_site(const TangentSliceFn& a, int j);

/// Fiberwise cyclic convolution in the fiber variable:
/// (a*b)(x, X) = dX * sum_Y a(x, Y) b(x, X - Y).
TangentSliceFn tangent_convolve(const TangentSliceFn& a, const TangentSliceFn& b);

/// Fiber Fourier transform F(a)(x_m, kappa_q) = dX * sum_j a(x_m, X_j)
/// e^{-i kappa_q X_j}, kappa_q = 2 pi q / (N dX); diagonalizes tangent_convolve.
ComplexMatrix fiber_fourier(const TangentSliceFn& a);

/// Phase-space observable h(x, p) on T*S^1: a two-variable field with x0 the
/// circle position and x1 the momentum. Periodicity in x0 is enforced
/// syntactically: x0 may appear only inside sin/cos.
class Observable {
 public:
  explicit Observable(ScalarField field);  // validates

  const ScalarField& field() const { return field_; }
  double operator()(double x, double p) const;

 private:
  ScalarField field_;
};

Observable parse_observable(std::string_view text);

/// Weyl-style midpoint quantization at fixed eps in (0,1): the kernel
///   k(x_m, x_n) = (1/L) sum_k h(mid(x_m, x_n), eps * xi_k) e^{i xi_k (x_m - x_n)}
/// with mid the shortest-arc chord midpoint and momentum entering as
/// p = eps * xi (eps plays the role of hbar).
KernelSlice quantize(const Observable& h, double eps, const GridSpec& grid);

/// || quantize(h1) * quantize(h2) - quantize(h1 h2) ||; shrinks O(eps).
double classical_limit_defect(const Observable& h1, const Observable& h2, double eps,
                              const GridSpec& grid);

/// {h1, h2} = dx h1 * dp h2 - dp h1 * dx h2, computed symbolically.
Observable poisson_bracket(const Observable& h1, const Observable& h2);

/// || (1/(i eps)) [quantize(h1), quantize(h2)] - quantize({h1, h2}) ||.
double moyal_defect(const Observable& h1, const Observable& h2, double eps,
                    const GridSpec& grid);

// Serialization: CSV rows (m, n, re, im) and a binary row-major layout with a
// 16-byte header (magic "TGKR", u32 N, f64 eps); the circumference is not
// stored and must be supplied on read.
void write_kernel_csv(const KernelSlice& k, std::ostream& out);
void write_kernel_binary(const KernelSlice& k, const std::string& path);
KernelSlice read_kernel_binary(const std::string& path, double circumference);

}  // namespace tg
