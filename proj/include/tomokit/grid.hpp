#pragma once

// Uniform grids, sampled fields, trapezoid quadrature and discrete Fourier
// transforms. Everything downstream samples q, p, X and k on these grids.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tomokit/errors.hpp"

namespace tomokit {

using cplx = std::complex<double>;

/// Endpoint-inclusive uniform grid: n points, n-1 intervals.
struct Grid1D {
  double min = 0.0;
  double max = 1.0;
  int n = 2;

  double step() const { return (max - min) / (n - 1); }
  double point(int i) const { return min + i * step(); }

  /// Fractional index of x; integer at grid points.
  double index(double x) const { return (x - min) / step(); }

  bool contains(double x) const { return x >= min && x <= max; }

  std::vector<double> points() const {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = point(i);
    return p;
  }

  bool operator==(const Grid1D&) const = default;
};

inline Grid1D make_uniform_grid(double min, double max, int n) {
  if (!(min < max))
    throw InvalidGridError("make_uniform_grid: min must be < max");
  if (n < 2) throw InvalidGridError("make_uniform_grid: need n >= 2");
  return Grid1D{min, max, n};
}

template <typename T>
struct SampledField1D {
  Grid1D grid;
  std::vector<T> values;

  void check() const {
    if (static_cast<int>(values.size()) != grid.n)
      throw InvalidGridError("SampledField1D: values length != grid.n");
  }
};

using RealField1D = SampledField1D<double>;
using ComplexField1D = SampledField1D<cplx>;

struct Grid2D {
  Grid1D gq;
  Grid1D gp;
};

template <typename T>
T trapezoid_integral(const SampledField1D<T>& f) {
  f.check();
  T acc = 0.5 * (f.values.front() + f.values.back());
  for (int i = 1; i + 1 < f.grid.n; ++i) acc += f.values[i];
  return acc * f.grid.step();
}

/// Trapezoid sum over raw samples with spacing h.
template <typename T>
T trapezoid_sum(const std::vector<T>& v, double h) {
  T acc = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) acc += v[i];
  return acc * h;
}

namespace detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 FFT computing sum_j v[j] exp(sign*i*2pi*jk/n).
inline void fft_pow2(std::vector<cplx>& a, int sign) {
  const int n = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / len;
    const cplx wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (int j = 0; j < len / 2; ++j) {
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace detail

/// Conjugate frequency grid of g: [-pi/step, pi/step) with g.n points.
inline Grid1D conjugate_grid(const Grid1D& g) {
  const double kny = std::numbers::pi / g.step();
  const double dk = 2.0 * kny / g.n;
  return Grid1D{-kny, -kny + (g.n - 1) * dk, g.n};
}

/// F(k) = sum_j values(j) exp(sign*i*k*x_j) * step, sampled on the conjugate
/// frequency grid. Forward (+1) followed by inverse (-1, scaled by 1/(2pi),
/// evaluated back on the original grid) recovers the input.
template <typename T>
ComplexField1D dft_1d(const SampledField1D<T>& f, int sign) {
  f.check();
  const int n = f.grid.n;
  const Grid1D kg = conjugate_grid(f.grid);
  const double step = f.grid.step();
  const double dk = kg.step();
  ComplexField1D out{kg, std::vector<cplx>(n)};
  if (detail::is_pow2(n)) {
    // k_m x_j = (k0 + m dk)(x0 + j step); dk*step = 2pi/n.
    std::vector<cplx> a(n);
    for (int j = 0; j < n; ++j) {
      const double ph = sign * kg.min * f.grid.point(j);
      a[j] = cplx(f.values[j]) * cplx(std::cos(ph), std::sin(ph)) * step;
    }
    detail::fft_pow2(a, sign);
    for (int m = 0; m < n; ++m) {
      const double ph = sign * m * dk * f.grid.min;
      out.values[m] = a[m] * cplx(std::cos(ph), std::sin(ph));
    }
  } else {
    for (int m = 0; m < n; ++m) {
      const double k = kg.point(m);
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const double ph = sign * k * f.grid.point(j);
        acc += cplx(f.values[j]) * cplx(std::cos(ph), std::sin(ph));
      }
      out.values[m] = acc * step;
    }
  }
  return out;
}

/// Same transform evaluated on a caller-chosen output grid.
template <typename T>
ComplexField1D dft_1d(const SampledField1D<T>& f, int sign,
                      const Grid1D& out_grid) {
  f.check();
  const double step = f.grid.step();
  ComplexField1D out{out_grid, std::vector<cplx>(out_grid.n)};
  for (int m = 0; m < out_grid.n; ++m) {
    const double k = out_grid.point(m);
    cplx acc = 0.0;
    for (int j = 0; j < f.grid.n; ++j) {
      const double ph = sign * k * f.grid.point(j);
      acc += cplx(f.values[j]) * cplx(std::cos(ph), std::sin(ph));
    }
    out.values[m] = acc * step;
  }
  return out;
}

}  // namespace tomokit
