#pragma once

// Classical phase-space states, quantum states and both characteristic
// functions. Conventions: hbar = 1, mass = 1, [q,p] = i.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tomokit/errors.hpp"
#include "tomokit/grid.hpp"
#include "tomokit/interp.hpp"

namespace tomokit {

/// First and second moments of a Gaussian state.
struct GaussianParams {
  double qbar = 0.0;
  double pbar = 0.0;
  double sqq = 0.5;
  double spp = 0.5;
  double sqp = 0.0;

  double det() const { return sqq * spp - sqp * sqp; }

  void validate() const {
    if (!(sqq > 0.0) || !(spp > 0.0) || !(det() > 0.0))
      throw CovarianceError("GaussianParams: covariance not positive definite");
  }
};

/// Fluctuation-free classical state, kept analytic (never sampled).
struct PointState {
  double qbar = 0.0;
  double pbar = 0.0;
};

/// Real density f(q_i, p_j) on a rectangular grid, row-major in q.
struct PhaseSpaceField {
  Grid2D grid;
  std::vector<double> values;

  double& at(int i, int j) { return values[i * grid.gp.n + j]; }
  double at(int i, int j) const { return values[i * grid.gp.n + j]; }

  double integral() const {
    const int nq = grid.gq.n, np = grid.gp.n;
    double acc = 0.0;
    for (int i = 0; i < nq; ++i) {
      const double wq = (i == 0 || i == nq - 1) ? 0.5 : 1.0;
      double row = 0.5 * (at(i, 0) + at(i, np - 1));
      for (int j = 1; j + 1 < np; ++j) row += at(i, j);
      acc += wq * row;
    }
    return acc * grid.gq.step() * grid.gp.step();
  }
};

struct WaveFunction {
  Grid1D grid;
  std::vector<cplx> amplitudes;

  double norm_squared() const {
    std::vector<double> d(amplitudes.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::norm(amplitudes[i]);
    return trapezoid_sum(d, grid.step());
  }
};

/// Complex kernel rho(q_i, q'_j), row-major in the first argument.
struct DensityMatrix {
  Grid1D grid;
  std::vector<cplx> entries;

  cplx& at(int i, int j) { return entries[i * grid.n + j]; }
  cplx at(int i, int j) const { return entries[i * grid.n + j]; }

  double trace() const {
    std::vector<double> d(grid.n);
    for (int i = 0; i < grid.n; ++i) d[i] = at(i, i).real();
    return trapezoid_sum(d, grid.step());
  }

  /// Eigenvalues of the discretized kernel rho*step, ascending.
  Eigen::VectorXd eigenvalues() const {
    const int n = grid.n;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = at(i, j) * grid.step();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    return es.eigenvalues();
  }
};

inline PhaseSpaceField gaussian_phase_density(const GaussianParams& g,
                                              const Grid2D& grid,
                                              double tol = 1e-6) {
  g.validate();
  const double sq = std::sqrt(g.sqq), sp = std::sqrt(g.spp);
  if (grid.gq.min > g.qbar - 5 * sq || grid.gq.max < g.qbar + 5 * sq ||
      grid.gp.min > g.pbar - 5 * sp || grid.gp.max < g.pbar + 5 * sp)
    throw GridTooSmallError(
        "gaussian_phase_density: grid must span 5 standard deviations");
  const double det = g.det();
  const double a = g.spp / det, b = -g.sqp / det, c = g.sqq / det;
  const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
  PhaseSpaceField f{grid, std::vector<double>(
                              static_cast<std::size_t>(grid.gq.n) * grid.gp.n)};
  for (int i = 0; i < grid.gq.n; ++i) {
    const double dq = grid.gq.point(i) - g.qbar;
    for (int j = 0; j < grid.gp.n; ++j) {
      const double dp = grid.gp.point(j) - g.pbar;
      f.at(i, j) =
          norm * std::exp(-0.5 * (a * dq * dq + 2 * b * dq * dp + c * dp * dp));
    }
  }
  if (std::abs(f.integral() - 1.0) > tol)
    throw GridTooSmallError(
        "gaussian_phase_density: support truncation above tolerance");
  return f;
}

/// Minimum-uncertainty pure state psi(q) =
/// (2 pi sqq)^(-1/4) exp(-(q-qbar)^2/(4 sqq) + i pbar q).
inline WaveFunction gaussian_wavefunction(const GaussianParams& g,
                                          const Grid1D& grid) {
  g.validate();
  if (std::abs(g.sqq * g.spp - 0.25) > 1e-12 || g.sqp != 0.0)
    throw NotMinimumUncertaintyError(
        "gaussian_wavefunction: need sqq*spp = 1/4 and sqp = 0");
  const double norm = std::pow(2.0 * std::numbers::pi * g.sqq, -0.25);
  WaveFunction psi{grid, std::vector<cplx>(grid.n)};
  for (int i = 0; i < grid.n; ++i) {
    const double q = grid.point(i);
    const double dq = q - g.qbar;
    const double mag = norm * std::exp(-dq * dq / (4.0 * g.sqq));
    psi.amplitudes[i] =
        mag * cplx(std::cos(g.pbar * q), std::sin(g.pbar * q));
  }
  return psi;
}

inline DensityMatrix density_from_wavefunction(const WaveFunction& psi) {
  const int n = psi.grid.n;
  DensityMatrix rho{psi.grid,
                    std::vector<cplx>(static_cast<std::size_t>(n) * n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rho.at(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
  return rho;
}

inline cplx classical_characteristic(const PhaseSpaceField& f, double k1,
                                     double k2) {
  const int nq = f.grid.gq.n, np = f.grid.gp.n;
  cplx acc = 0.0;
  for (int i = 0; i < nq; ++i) {
    const double wq = (i == 0 || i == nq - 1) ? 0.5 : 1.0;
    const double q = f.grid.gq.point(i);
    cplx row = 0.0;
    for (int j = 0; j < np; ++j) {
      const double wp = (j == 0 || j == np - 1) ? 0.5 : 1.0;
      const double ph = k2 * f.grid.gp.point(j);
      row += wp * f.at(i, j) * cplx(std::cos(ph), std::sin(ph));
    }
    const double ph = k1 * q;
    acc += wq * row * cplx(std::cos(ph), std::sin(ph));
  }
  return acc * f.grid.gq.step() * f.grid.gp.step();
}

/// Sifting property of the delta density: chi = exp(i(k1 qbar + k2 pbar)).
inline cplx classical_characteristic(const PointState& s, double k1,
                                     double k2) {
  const double ph = k1 * s.qbar + k2 * s.pbar;
  return cplx(std::cos(ph), std::sin(ph));
}

inline cplx classical_characteristic(const GaussianParams& g, double k1,
                                     double k2) {
  const double ph = k1 * g.qbar + k2 * g.pbar;
  const double quad =
      0.5 * (g.sqq * k1 * k1 + 2 * g.sqp * k1 * k2 + g.spp * k2 * k2);
  return std::exp(-quad) * cplx(std::cos(ph), std::sin(ph));
}

/// chi(k1,k2) = Tr[rho exp(i(k1 q + k2 p))]. With the splitting
/// exp(i(k1 q + k2 p)) = exp(i k1 q) exp(i k2 p) exp(i k1 k2 / 2) this is
/// exp(i k1 k2 / 2) * Integral rho(q + k2, q) exp(i k1 q) dq. Off-grid shifts
/// are interpolated (cubic); leaking more than leak_tol probability past the
/// grid is an error.
inline cplx quantum_characteristic(const DensityMatrix& rho, double k1,
                                   double k2, double leak_tol = 1e-6) {
  const int n = rho.grid.n;
  const double step = rho.grid.step();
  // Off-grid rows are bounded by Schwarz: |rho(x,y)| <= sqrt(rho(x,x)rho(y,y))
  // with rho(x,x) estimated by the boundary diagonal value on that side.
  const double edge_lo = std::max(0.0, rho.at(0, 0).real());
  const double edge_hi = std::max(0.0, rho.at(n - 1, n - 1).real());
  double leak = 0.0;
  std::vector<cplx> integrand(n);
  for (int j = 0; j < n; ++j) {
    const double q = rho.grid.point(j);
    const double qs = q + k2;
    if (!rho.grid.contains(qs)) {
      const double edge = qs > rho.grid.max ? edge_hi : edge_lo;
      leak += std::sqrt(std::max(0.0, rho.at(j, j).real()) * edge) * step;
      integrand[j] = 0.0;
      continue;
    }
    const double fi = rho.grid.index(qs);
    const int i0 = static_cast<int>(std::floor(fi));
    const auto w = detail::catmull_weights(fi - i0);
    cplx v = 0.0;
    for (int a = 0; a < 4; ++a) {
      const int idx = i0 + a - 1;
      if (idx >= 0 && idx < n) v += w[a] * rho.at(idx, j);
    }
    const double ph = k1 * q;
    integrand[j] = v * cplx(std::cos(ph), std::sin(ph));
  }
  if (leak > leak_tol)
    throw SupportLeavesGridError(
        "quantum_characteristic: shift k2 pushes support past the grid");
  const cplx val = trapezoid_sum(integrand, step);
  const double bch = 0.5 * k1 * k2;
  return val * cplx(std::cos(bch), std::sin(bch));
}

}  // namespace tomokit
