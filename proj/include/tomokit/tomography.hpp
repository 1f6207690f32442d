#pragma once

// Forward and inverse tomographic transforms. The delta kernel
// delta(X - mu q - nu p) is never discretized: every forward transform goes
// through characteristic functions and 1-D Fourier inversion (Fourier-slice
// theorem), and the inverse transforms reduce the (mu, nu) plane to the unit
// circle via the homogeneity property W(lX, lm, ln) = |l|^-1 W(X, m, n).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tomokit/errors.hpp"
#include "tomokit/grid.hpp"
#include "tomokit/interp.hpp"
#include "tomokit/states.hpp"

namespace tomokit {

/// Direction (mu, nu) of the quadrature X = mu q + nu p.
struct Ray {
  double mu = 1.0;
  double nu = 0.0;

  static Ray from_angle(double theta, double s = 1.0) {
    return Ray{s * std::cos(theta), std::sin(theta) / s};
  }

  void validate() const {
    if (mu == 0.0 && nu == 0.0)
      throw DegenerateRayError("Ray: (mu, nu) must not be (0, 0)");
  }
};

using RaySet = std::vector<Ray>;

/// n_angles unit-circle rays, theta_i = i*pi/n_angles over [0, pi).
inline RaySet unit_circle_rays(int n_angles) {
  if (n_angles < 1) throw InvalidGridError("unit_circle_rays: need n >= 1");
  RaySet rays(n_angles);
  for (int i = 0; i < n_angles; ++i) {
    const double th = i * std::numbers::pi / n_angles;
    rays[i] = Ray{std::cos(th), std::sin(th)};
  }
  return rays;
}

struct TomogramSlice {
  Ray ray;
  Grid1D xgrid;
  std::vector<double> values;

  double integral() const { return trapezoid_sum(values, xgrid.step()); }
};

struct TomogramField {
  std::vector<TomogramSlice> slices;
  double time = 0.0;
};

/// Analytic Gaussian tomogram; sigma_XX(mu,nu) is evaluated per ray.
struct GaussianTomogram {
  GaussianParams params;
  double time = 0.0;
};

/// Analytic descriptor of the singular slice of a fluctuation-free state:
/// W(X, mu, nu) = delta(X - x0).
struct SingularSlice {
  Ray ray;
  double x0 = 0.0;
};

inline double sigma_xx(const GaussianTomogram& g, const Ray& ray) {
  ray.validate();
  const auto& p = g.params;
  return ray.mu * ray.mu * p.sqq + ray.nu * ray.nu * p.spp +
         2.0 * ray.mu * ray.nu * p.sqp;
}

/// Normal density in X with mean mu*qbar + nu*pbar and variance sigma_xx.
inline double gaussian_tomogram_eval(const GaussianTomogram& g, const Ray& ray,
                                     double x) {
  const double var = sigma_xx(g, ray);
  const double mean = ray.mu * g.params.qbar + ray.nu * g.params.pbar;
  const double d = x - mean;
  return std::exp(-d * d / (2.0 * var)) /
         std::sqrt(2.0 * std::numbers::pi * var);
}

inline TomogramSlice gaussian_tomogram_slice(const GaussianTomogram& g,
                                             const Ray& ray,
                                             const Grid1D& xgrid) {
  TomogramSlice s{ray, xgrid, std::vector<double>(xgrid.n)};
  for (int i = 0; i < xgrid.n; ++i)
    s.values[i] = gaussian_tomogram_eval(g, ray, xgrid.point(i));
  return s;
}

/// Tuning knobs for the transform kernels. The defaults suit states with
/// phase-space covariances in roughly [0.1, 3] on grids spanning ~[-8, 8].
struct RadonOptions {
  double k_max = 16.0;   ///< characteristic-function band limit
  double dk = 0.0625;    ///< Cartesian k-grid spacing
  int pad_factor = 4;    ///< zero-padding of slices before the polar FFT
  double clip_tol = 1e-4;   ///< largest tolerated negative excursion
  double leak_tol = 1e-6;   ///< tolerated probability leak past a grid
  double physical_tol = 1e-3;  ///< eigenvalue floor for a physical density
  int min_angles = 64;
};

namespace detail {

/// Validated view of a TomogramField whose rays are the uniform unit-circle
/// set theta_i = i*pi/N and whose slices share one X grid.
struct UnitCircleView {
  const TomogramField* field;
  int n_angles;
  Grid1D xgrid;

  explicit UnitCircleView(const TomogramField& w) : field(&w) {
    n_angles = static_cast<int>(w.slices.size());
    if (n_angles < 1)
      throw InsufficientSamplingError("tomogram field has no slices");
    xgrid = w.slices.front().xgrid;
    for (int i = 0; i < n_angles; ++i) {
      const auto& s = w.slices[i];
      if (!(s.xgrid == xgrid))
        throw InsufficientSamplingError("inconsistent slice x-grids");
      const double th = i * std::numbers::pi / n_angles;
      if (std::abs(s.ray.mu - std::cos(th)) > 1e-9 ||
          std::abs(s.ray.nu - std::sin(th)) > 1e-9)
        throw InsufficientSamplingError(
            "ray set is not the uniform unit-circle set");
    }
  }

  /// W(X, mu, nu) for arbitrary (mu, nu) via homogeneity and cubic
  /// interpolation across angle and X. Outside the sampled X range the
  /// tomogram reads as zero.
  double eval(double x, double mu, double nu) const {
    double r = std::hypot(mu, nu);
    if (r == 0.0) throw DegenerateRayError("eval at (0,0)");
    double th = std::atan2(nu, mu);
    if (th < 0) {
      th += std::numbers::pi;
      r = -r;
    }
    const double dth = std::numbers::pi / n_angles;
    const double ti = th / dth;
    const int t0 = static_cast<int>(std::floor(ti));
    const auto wt = catmull_weights(ti - t0);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
      const int ta = t0 + a - 1;
      int wrap = ta % n_angles;
      if (wrap < 0) wrap += n_angles;
      // crossing theta += pi flips the slice: W(X, -m, -n) = W(-X, m, n)
      const int folds = (ta - wrap) / n_angles;
      const double sign = (folds % 2 == 0) ? 1.0 : -1.0;
      const double y = sign * x / r;
      acc += wt[a] * cubic_sample(field->slices[wrap].values,
                                  xgrid.index(y));
    }
    return acc / std::abs(r);
  }
};

/// chi(k mu, k nu) = Integral exp(ikX) W(X, mu, nu) dX tabulated on polar
/// rays (r on the padded FFT frequency grid, theta on the stored angles).
struct ChiPolarTable {
  int n_angles;
  int n_pad;
  double dr;
  std::vector<std::vector<cplx>> chis;  // [theta][fft-ordered r]

  ChiPolarTable(const UnitCircleView& view, int pad_factor) {
    n_angles = view.n_angles;
    const Grid1D& xg = view.xgrid;
    n_pad = 1;
    while (n_pad < xg.n * pad_factor) n_pad <<= 1;
    const double dx = xg.step();
    dr = 2.0 * std::numbers::pi / (n_pad * dx);
    chis.resize(n_angles);
    for (int t = 0; t < n_angles; ++t) {
      std::vector<cplx> a(n_pad, cplx(0.0));
      for (int j = 0; j < xg.n; ++j) a[j] = view.field->slices[t].values[j];
      fft_pow2(a, +1);
      // restore the absolute X origin: r_m (X0 + j dx) phases
      for (int m = 0; m < n_pad; ++m) {
        const double r = freq(m);
        const double ph = r * xg.min;
        a[m] *= cplx(std::cos(ph), std::sin(ph)) * dx;
      }
      chis[t] = std::move(a);
    }
  }

  double freq(int m) const {
    return (m <= n_pad / 2 ? m : m - n_pad) * dr;
  }

  /// Bicubic sample of chi at Cartesian (k1, k2).
  cplx eval(double k1, double k2) const {
    double r = std::hypot(k1, k2);
    if (r == 0.0) return cplx(1.0);
    double th = std::atan2(k2, k1);
    if (th < 0) {
      th += std::numbers::pi;
      r = -r;
    }
    if (std::abs(r) >= (n_pad / 2 - 2) * dr) return cplx(0.0);
    const double dth = std::numbers::pi / n_angles;
    const double ti = th / dth;
    const int t0 = static_cast<int>(std::floor(ti));
    const auto wt = catmull_weights(ti - t0);
    const double ri = r / dr;
    const int r0 = static_cast<int>(std::floor(ri));
    const auto wr = catmull_weights(ri - r0);
    cplx acc = 0.0;
    for (int a = 0; a < 4; ++a) {
      const int ta = t0 + a - 1;
      int wrap = ta % n_angles;
      if (wrap < 0) wrap += n_angles;
      const int folds = (ta - wrap) / n_angles;
      const bool flip = (folds % 2) != 0;  // theta + pi  <=>  r -> -r
      cplx row = 0.0;
      for (int b = 0; b < 4; ++b) {
        int rb = r0 + b - 1;
        if (flip) rb = -rb;
        int idx = rb % n_pad;
        if (idx < 0) idx += n_pad;
        row += wr[b] * chis[wrap][idx];
      }
      acc += wt[a] * row;
    }
    return acc;
  }
};

/// Clamp small negative excursions and renormalize to a unit integral.
inline void enforce_slice_invariants(TomogramSlice& s, double clip_tol) {
  double mn = 0.0;
  for (double v : s.values) mn = std::min(mn, v);
  if (mn < -clip_tol)
    throw Error("tomogram slice significantly negative: " +
                std::to_string(mn));
  for (double& v : s.values)
    if (v < 0.0) v = 0.0;
  const double norm = s.integral();
  if (!(norm > 0.0))
    throw Error("tomogram slice has vanishing mass on the x-grid");
  for (double& v : s.values) v /= norm;
}

/// Synthesize W(X) = (1/2pi) Integral exp(-ikX) chi_ray(k) dk on xgrid.
inline TomogramSlice synth_slice(const Ray& ray, const Grid1D& xgrid,
                                 const std::vector<double>& ks,
                                 const std::vector<cplx>& chi_ray, double dk,
                                 double clip_tol) {
  TomogramSlice s{ray, xgrid, std::vector<double>(xgrid.n)};
  const int nk = static_cast<int>(ks.size());
  for (int ix = 0; ix < xgrid.n; ++ix) {
    const double x = xgrid.point(ix);
    // phase recurrence over the uniform k grid
    const cplx rot(std::cos(-dk * x), std::sin(-dk * x));
    cplx ph(std::cos(-ks[0] * x), std::sin(-ks[0] * x));
    double acc = 0.0;
    for (int m = 0; m < nk; ++m) {
      acc += (chi_ray[m] * ph).real();
      ph *= rot;
    }
    s.values[ix] = acc * dk / (2.0 * std::numbers::pi);
  }
  enforce_slice_invariants(s, clip_tol);
  return s;
}

inline std::vector<double> k_grid(double k_max, double dk, double* dk_out) {
  const int half = static_cast<int>(std::ceil(k_max / dk));
  std::vector<double> ks(2 * half + 1);
  for (int m = 0; m <= 2 * half; ++m) ks[m] = (m - half) * dk;
  *dk_out = dk;
  return ks;
}

}  // namespace detail

/// Classical Radon transform of a sampled phase-space density, computed via
/// the Fourier-slice route: the 2-D characteristic function is tabulated on
/// a Cartesian k grid once, then sampled along each ray and inverted in 1-D.
inline TomogramField radon_classical(const PhaseSpaceField& f,
                                     const RaySet& rays, const Grid1D& xgrid,
                                     const RadonOptions& opts = {}) {
  const int nq = f.grid.gq.n, np = f.grid.gp.n;
  const double dq = f.grid.gq.step(), dp = f.grid.gp.step();
  double dk;
  const auto ks = detail::k_grid(opts.k_max, opts.dk, &dk);
  const int nk = static_cast<int>(ks.size());

  // chi(k1, k2) = sum_ij f_ij e^{i k1 q_i} e^{i k2 p_j} wq wp, separably.
  std::vector<cplx> a(static_cast<std::size_t>(nk) * np);  // (k1, p)
  for (int m = 0; m < nk; ++m) {
    const double k1 = ks[m];
    const cplx rot(std::cos(k1 * dq), std::sin(k1 * dq));
    cplx ph(std::cos(k1 * f.grid.gq.min), std::sin(k1 * f.grid.gq.min));
    for (int j = 0; j < np; ++j) a[static_cast<std::size_t>(m) * np + j] = 0.0;
    for (int i = 0; i < nq; ++i) {
      const double w = ((i == 0 || i == nq - 1) ? 0.5 : 1.0) * dq;
      const cplx c = ph * w;
      const double* row = &f.values[static_cast<std::size_t>(i) * np];
      cplx* out = &a[static_cast<std::size_t>(m) * np];
      for (int j = 0; j < np; ++j) out[j] += c * row[j];
      ph *= rot;
    }
  }
  std::vector<cplx> chi(static_cast<std::size_t>(nk) * nk);  // (k1, k2)
  for (int m2 = 0; m2 < nk; ++m2) {
    const double k2 = ks[m2];
    std::vector<cplx> e(np);
    for (int j = 0; j < np; ++j) {
      const double w = ((j == 0 || j == np - 1) ? 0.5 : 1.0) * dp;
      const double ph = k2 * f.grid.gp.point(j);
      e[j] = cplx(std::cos(ph), std::sin(ph)) * w;
    }
    for (int m1 = 0; m1 < nk; ++m1) {
      const cplx* row = &a[static_cast<std::size_t>(m1) * np];
      cplx acc = 0.0;
      for (int j = 0; j < np; ++j) acc += row[j] * e[j];
      chi[static_cast<std::size_t>(m1) * nk + m2] = acc;
    }
  }

  const double k_lo = ks.front();
  auto chi_at = [&](double k1, double k2) -> cplx {
    const double i1 = (k1 - k_lo) / dk;
    const double i2 = (k2 - k_lo) / dk;
    const int b1 = static_cast<int>(std::floor(i1));
    const int b2 = static_cast<int>(std::floor(i2));
    const auto w1 = detail::catmull_weights(i1 - b1);
    const auto w2 = detail::catmull_weights(i2 - b2);
    cplx acc = 0.0;
    for (int u = 0; u < 4; ++u) {
      const int iu = std::clamp(b1 + u - 1, 0, nk - 1);
      cplx row = 0.0;
      for (int v = 0; v < 4; ++v) {
        const int iv = std::clamp(b2 + v - 1, 0, nk - 1);
        row += w2[v] * chi[static_cast<std::size_t>(iu) * nk + iv];
      }
      acc += w1[u] * row;
    }
    return acc;
  };

  TomogramField out;
  out.slices.reserve(rays.size());
  std::vector<cplx> chi_ray(nk);
  for (const Ray& ray : rays) {
    ray.validate();
    const double scale = std::hypot(ray.mu, ray.nu);
    for (int m = 0; m < nk; ++m)
      chi_ray[m] = chi_at(ks[m] * ray.mu / scale, ks[m] * ray.nu / scale);
    // homogeneity: W(X, m, n) = W_u(X/s, m/s, n/s) / s with s = |(m, n)|
    Grid1D unit_xs{xgrid.min / scale, xgrid.max / scale, xgrid.n};
    TomogramSlice s = detail::synth_slice(ray, unit_xs, ks, chi_ray, dk,
                                          opts.clip_tol);
    s.xgrid = xgrid;
    for (double& v : s.values) v /= scale;
    out.slices.push_back(std::move(s));
  }
  return out;
}

/// Analytic branch: Gaussian phase densities have Gaussian tomograms.
inline TomogramField radon_classical(const GaussianParams& g,
                                     const RaySet& rays, const Grid1D& xgrid) {
  g.validate();
  GaussianTomogram gt{g, 0.0};
  TomogramField out;
  out.slices.reserve(rays.size());
  for (const Ray& ray : rays) {
    ray.validate();
    out.slices.push_back(gaussian_tomogram_slice(gt, ray, xgrid));
  }
  return out;
}

/// Analytic branch: the delta density stays a delta on every ray.
inline SingularSlice radon_classical(const PointState& s, const Ray& ray) {
  ray.validate();
  return SingularSlice{ray, ray.mu * s.qbar + ray.nu * s.pbar};
}

/// Quantum tomogram W(X, mu, nu) = (1/2pi) Integral exp(-ikX)
/// chi_q(k mu, k nu) dk. Axis rays use the exact marginal closed forms.
inline TomogramField tomogram_quantum(const DensityMatrix& rho,
                                      const RaySet& rays, const Grid1D& xgrid,
                                      const RadonOptions& opts = {}) {
  const int n = rho.grid.n;
  const double dqg = rho.grid.step();
  const double span = std::max(std::abs(xgrid.min), std::abs(xgrid.max));
  const double dk =
      std::min(opts.dk, 2.0 * std::numbers::pi / (8.0 * 2.0 * span));
  double dk_used;
  const auto ks = detail::k_grid(opts.k_max, dk, &dk_used);
  const int nk = static_cast<int>(ks.size());

  auto momentum_density = [&](double p) -> double {
    cplx acc = 0.0;
    std::vector<cplx> u(n);
    for (int l = 0; l < n; ++l) {
      const double w = ((l == 0 || l == n - 1) ? 0.5 : 1.0) * dqg;
      const double ph = p * rho.grid.point(l);
      u[l] = cplx(std::cos(ph), std::sin(ph)) * w;
    }
    for (int j = 0; j < n; ++j) {
      const cplx* row = &rho.entries[static_cast<std::size_t>(j) * n];
      cplx t = 0.0;
      for (int l = 0; l < n; ++l) t += row[l] * u[l];
      acc += std::conj(u[j]) * t;
    }
    return acc.real() / (2.0 * std::numbers::pi);
  };

  TomogramField out;
  out.slices.reserve(rays.size());
  std::vector<cplx> chi_ray(nk);
  for (const Ray& ray : rays) {
    ray.validate();
    TomogramSlice s{ray, xgrid, std::vector<double>(xgrid.n)};
    if (ray.nu == 0.0) {
      // W(X, mu, 0) = rho(X/mu, X/mu) / |mu|
      std::vector<double> diag(n);
      for (int i = 0; i < n; ++i) diag[i] = rho.at(i, i).real();
      for (int ix = 0; ix < xgrid.n; ++ix) {
        const double y = xgrid.point(ix) / ray.mu;
        s.values[ix] = rho.grid.contains(y)
                           ? detail::cubic_sample(diag, rho.grid.index(y)) /
                                 std::abs(ray.mu)
                           : 0.0;
      }
    } else if (ray.mu == 0.0) {
      // W(X, 0, nu) = rho~(X/nu) / |nu| with rho~ the momentum diagonal
      for (int ix = 0; ix < xgrid.n; ++ix)
        s.values[ix] = momentum_density(xgrid.point(ix) / ray.nu) /
                       std::abs(ray.nu);
    } else {
      const double edge_lo = std::max(0.0, rho.at(0, 0).real());
      const double edge_hi = std::max(0.0, rho.at(n - 1, n - 1).real());
      double leak_max = 0.0;
      for (int m = 0; m < nk; ++m) {
        const double k1 = -ks[m] * ray.mu;
        const double k2 = -ks[m] * ray.nu;
        // chi_q inline (cubic shift of the first index), tracking leakage via
        // the Schwarz bound |rho(x,y)| <= sqrt(rho(x,x)rho(y,y))
        double leak = 0.0;
        cplx val = 0.0;
        for (int j = 0; j < n; ++j) {
          const double q = rho.grid.point(j);
          const double qs = q + k2;
          if (!rho.grid.contains(qs)) {
            const double edge = qs > rho.grid.max ? edge_hi : edge_lo;
            leak += std::sqrt(std::max(0.0, rho.at(j, j).real()) * edge) * dqg;
            continue;
          }
          const double fi = rho.grid.index(qs);
          const int i0 = static_cast<int>(std::floor(fi));
          const auto w = detail::catmull_weights(fi - i0);
          cplx v = 0.0;
          for (int a2 = 0; a2 < 4; ++a2) {
            const int idx = i0 + a2 - 1;
            if (idx >= 0 && idx < n)
              v += w[a2] * rho.entries[static_cast<std::size_t>(idx) * n + j];
          }
          const double wq = (j == 0 || j == n - 1) ? 0.5 : 1.0;
          const double ph = k1 * q;
          val += wq * v * cplx(std::cos(ph), std::sin(ph));
        }
        const double bch = 0.5 * k1 * k2;
        chi_ray[m] = val * dqg * cplx(std::cos(bch), std::sin(bch));
        leak_max = std::max(leak_max, leak);
      }
      if (leak_max > opts.leak_tol)
        throw SupportLeavesGridError(
            "tomogram_quantum: state support exceeds grid (leak " +
            std::to_string(leak_max) + ")");
      s = detail::synth_slice(ray, xgrid, ks, chi_ray, dk_used,
                              opts.clip_tol);
    }
    detail::enforce_slice_invariants(s, opts.clip_tol);
    out.slices.push_back(std::move(s));
  }
  return out;
}

inline TomogramField tomogram_quantum(const WaveFunction& psi,
                                      const RaySet& rays, const Grid1D& xgrid,
                                      const RadonOptions& opts = {}) {
  return tomogram_quantum(density_from_wavefunction(psi), rays, xgrid, opts);
}

/// Inverse Radon transform: polar chi samples from unit-circle slices are
/// regridded onto a Cartesian k plane (bicubic) and inverted by a separable
/// 2-D Fourier sum. The result is clipped to the nonnegativity and
/// normalization invariants.
inline PhaseSpaceField inverse_radon(const TomogramField& w,
                                     const Grid2D& out_grid,
                                     const RadonOptions& opts = {}) {
  detail::UnitCircleView view(w);
  if (view.n_angles < opts.min_angles)
    throw InsufficientSamplingError(
        "inverse_radon: need >= " + std::to_string(opts.min_angles) +
        " unit-circle angles");
  detail::ChiPolarTable table(view, opts.pad_factor);

  double dk;
  const auto ks = detail::k_grid(opts.k_max, opts.dk, &dk);
  const int nk = static_cast<int>(ks.size());
  std::vector<cplx> chi(static_cast<std::size_t>(nk) * nk);
  for (int m1 = 0; m1 < nk; ++m1)
    for (int m2 = 0; m2 < nk; ++m2)
      chi[static_cast<std::size_t>(m1) * nk + m2] = table.eval(ks[m1], ks[m2]);

  const Grid1D& gq = out_grid.gq;
  const Grid1D& gp = out_grid.gp;
  // tmp(k2, q) = sum_k1 chi e^{-i k1 q}
  std::vector<cplx> tmp(static_cast<std::size_t>(nk) * gq.n);
  for (int iq = 0; iq < gq.n; ++iq) {
    const double q = gq.point(iq);
    const cplx rot(std::cos(-dk * q), std::sin(-dk * q));
    for (int m2 = 0; m2 < nk; ++m2) tmp[static_cast<std::size_t>(m2) * gq.n + iq] = 0.0;
    cplx ph(std::cos(-ks[0] * q), std::sin(-ks[0] * q));
    for (int m1 = 0; m1 < nk; ++m1) {
      const cplx* row = &chi[static_cast<std::size_t>(m1) * nk];
      for (int m2 = 0; m2 < nk; ++m2)
        tmp[static_cast<std::size_t>(m2) * gq.n + iq] += row[m2] * ph;
      ph *= rot;
    }
  }
  PhaseSpaceField f{out_grid,
                    std::vector<double>(static_cast<std::size_t>(gq.n) * gp.n)};
  const double scale = dk * dk / (4.0 * std::numbers::pi * std::numbers::pi);
  for (int ip = 0; ip < gp.n; ++ip) {
    const double p = gp.point(ip);
    const cplx rot(std::cos(-dk * p), std::sin(-dk * p));
    for (int iq = 0; iq < gq.n; ++iq) {
      cplx ph(std::cos(-ks[0] * p), std::sin(-ks[0] * p));
      cplx acc = 0.0;
      for (int m2 = 0; m2 < nk; ++m2) {
        acc += tmp[static_cast<std::size_t>(m2) * gq.n + iq] * ph;
        ph *= rot;
      }
      f.at(iq, ip) = (acc * scale).real();
    }
  }
  // clip to invariants
  double mn = 0.0;
  for (double v : f.values) mn = std::min(mn, v);
  if (mn < -opts.clip_tol)
    throw Error("inverse_radon: reconstruction significantly negative");
  for (double& v : f.values)
    if (v < 0.0) v = 0.0;
  const double norm = f.integral();
  for (double& v : f.values) v /= norm;
  return f;
}

struct ReconstructionResult {
  DensityMatrix rho;
  double min_eigenvalue = 0.0;
  bool physical = true;
};

/// Density-operator reconstruction. With <q|exp(i(-mu qh - nu ph))|q'> =
/// e^{-i mu q} delta(q - q' - nu) e^{i mu nu / 2}, the operator integral
/// collapses to rho(q, q') = (1/2pi) Integral chi(mu, q - q')
/// e^{-i mu (q + q')/2} d mu, with chi(mu, nu) = Integral e^{iX}
/// W(X, mu, nu) dX read off the polar chi table by homogeneity.
inline ReconstructionResult reconstruct_density(const TomogramField& w,
                                                const Grid1D& qgrid,
                                                const RadonOptions& opts = {}) {
  detail::UnitCircleView view(w);
  if (view.n_angles < opts.min_angles)
    throw InsufficientSamplingError(
        "reconstruct_density: need >= " + std::to_string(opts.min_angles) +
        " unit-circle angles");
  detail::ChiPolarTable table(view, opts.pad_factor);

  const int n = qgrid.n;
  const double dq = qgrid.step();
  double dmu;
  const auto mus = detail::k_grid(opts.k_max, opts.dk, &dmu);
  const int nmu = static_cast<int>(mus.size());
  const double r_cut = opts.k_max;

  DensityMatrix rho{qgrid, std::vector<cplx>(static_cast<std::size_t>(n) * n)};
  std::vector<cplx> row(nmu);
  for (int d = -(n - 1); d <= n - 1; ++d) {
    const double nu = d * dq;
    bool any = false;
    for (int m = 0; m < nmu; ++m) {
      if (mus[m] * mus[m] + nu * nu > r_cut * r_cut) {
        row[m] = 0.0;
      } else {
        row[m] = table.eval(mus[m], nu);
        any = true;
      }
    }
    if (!any) continue;
    const int lo = std::max(0, d);
    const int hi = n + std::min(0, d);  // i in [lo, hi), j = i - d
    for (int i = lo; i < hi; ++i) {
      const int j = i - d;
      const double s = 0.5 * (qgrid.point(i) + qgrid.point(j));
      const cplx rot(std::cos(-dmu * s), std::sin(-dmu * s));
      cplx ph(std::cos(-mus[0] * s), std::sin(-mus[0] * s));
      cplx acc = 0.0;
      for (int m = 0; m < nmu; ++m) {
        acc += row[m] * ph;
        ph *= rot;
      }
      rho.at(i, j) = acc * dmu / (2.0 * std::numbers::pi);
    }
  }
  // Hermitize
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const cplx v = 0.5 * (rho.at(i, j) + std::conj(rho.at(j, i)));
      rho.at(i, j) = v;
      rho.at(j, i) = std::conj(v);
    }
  ReconstructionResult res;
  res.rho = std::move(rho);
  res.min_eigenvalue = res.rho.eigenvalues().minCoeff();
  res.physical = res.min_eigenvalue >= -opts.physical_tol;
  return res;
}

}  // namespace tomokit
