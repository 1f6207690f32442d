#pragma once

// Free-motion (V = 0, m = 1, hbar = 1) evolution in every picture. The
// classical density shears, the quantum state picks up the spectral phase
// exp(-i k^2 t / 2), and both tomograms follow the same ray shear
// (mu, nu) -> (mu, nu + mu t).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "tomokit/errors.hpp"
#include "tomokit/grid.hpp"
#include "tomokit/interp.hpp"
#include "tomokit/states.hpp"
#include "tomokit/tomography.hpp"

namespace tomokit {

/// The two integrals of motion (q0, p0) = (q - p t, p).
inline std::pair<double, double> integrals_of_motion(double q, double p,
                                                     double t) {
  return {q - p * t, p};
}

inline PointState evolve_classical(const PointState& s, double t) {
  return PointState{s.qbar + s.pbar * t, s.pbar};
}

inline GaussianParams evolve_classical(const GaussianParams& g, double t) {
  GaussianParams out = g;
  out.qbar = g.qbar + g.pbar * t;
  out.sqq = g.sqq + 2.0 * t * g.sqp + t * t * g.spp;
  out.sqp = g.sqp + t * g.spp;
  return out;
}

/// f(q, p, t) = f0(q - p t, p), cubic interpolation along q.
inline PhaseSpaceField evolve_classical(const PhaseSpaceField& f, double t,
                                        double leak_tol = 1e-6) {
  const int nq = f.grid.gq.n, np = f.grid.gp.n;
  PhaseSpaceField out{f.grid, std::vector<double>(f.values.size())};
  std::vector<double> col(nq);
  for (int j = 0; j < np; ++j) {
    const double shift = f.grid.gp.point(j) * t;
    for (int i = 0; i < nq; ++i) col[i] = f.at(i, j);
    for (int i = 0; i < nq; ++i) {
      const double q0 = f.grid.gq.point(i) - shift;
      out.at(i, j) = f.grid.gq.contains(q0)
                         ? std::max(0.0, detail::cubic_sample(
                                             col, f.grid.gq.index(q0)))
                         : 0.0;
    }
  }
  const double lost = f.integral() - out.integral();
  if (std::abs(lost) > leak_tol)
    throw SupportLeavesGridError(
        "evolve_classical: sheared support leaves the grid");
  return out;
}

/// Spectral free propagation: multiply by exp(-i k^2 t / 2) in the momentum
/// representation. Aliasing is detected via probability in the outer 1/16
/// guard bands of the grid.
inline WaveFunction evolve_wavefunction(const WaveFunction& psi, double t,
                                        double guard_tol = 1e-8) {
  if (t == 0.0) return psi;
  SampledField1D<cplx> f{psi.grid, psi.amplitudes};
  ComplexField1D ft = dft_1d(f, -1);
  for (int m = 0; m < ft.grid.n; ++m) {
    const double k = ft.grid.point(m);
    const double ph = -0.5 * k * k * t;
    ft.values[m] *= cplx(std::cos(ph), std::sin(ph));
  }
  ComplexField1D back = dft_1d(ft, +1, psi.grid);
  WaveFunction out{psi.grid, std::move(back.values)};
  const double inv = 1.0 / (2.0 * std::numbers::pi);
  for (auto& a : out.amplitudes) a *= inv;
  const int guard = std::max(1, psi.grid.n / 16);
  double edge = 0.0;
  for (int i = 0; i < guard; ++i)
    edge += (std::norm(out.amplitudes[i]) +
             std::norm(out.amplitudes[psi.grid.n - 1 - i])) *
            psi.grid.step();
  if (edge > guard_tol)
    throw SupportLeavesGridError(
        "evolve_wavefunction: packet reaches the grid boundary");
  return out;
}

/// rho(t) = U rho U^dagger with U the spectral free propagator.
inline DensityMatrix evolve_density(const DensityMatrix& rho, double t) {
  if (t == 0.0) return rho;
  const int n = rho.grid.n;
  const Grid1D kg = conjugate_grid(rho.grid);
  const double dx = rho.grid.step(), dk = kg.step();
  Eigen::MatrixXcd fwd(n, n), inv(n, n);
  for (int m = 0; m < n; ++m) {
    const double k = kg.point(m);
    const double phk = -0.5 * k * k * t;
    const cplx d = cplx(std::cos(phk), std::sin(phk));
    for (int j = 0; j < n; ++j) {
      const double ph = k * rho.grid.point(j);
      fwd(m, j) = cplx(std::cos(ph), -std::sin(ph)) * dx;          // e^{-ikx}
      inv(j, m) = cplx(std::cos(ph), std::sin(ph)) * d *
                  (dk / (2.0 * std::numbers::pi));                 // e^{+ikx}
    }
  }
  Eigen::MatrixXcd u = inv * fwd;
  Eigen::MatrixXcd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = rho.at(i, j);
  Eigen::MatrixXcd rt = u * r * u.adjoint();
  DensityMatrix out{rho.grid, std::vector<cplx>(rho.entries.size())};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = rt(i, j);
  return out;
}

inline GaussianTomogram evolve_tomogram(const GaussianTomogram& g, double t) {
  return GaussianTomogram{evolve_classical(g.params, t), g.time + t};
}

/// W(X, mu, nu, t) = W0(X, mu, nu + mu t); shifted rays are re-expressed on
/// the stored unit-circle set via homogeneity.
inline TomogramField evolve_tomogram(const TomogramField& w, double t,
                                     double norm_tol = 1e-3) {
  detail::UnitCircleView view(w);
  TomogramField out;
  out.time = w.time + t;
  out.slices.reserve(w.slices.size());
  for (const auto& s : w.slices) {
    TomogramSlice es{s.ray, s.xgrid, std::vector<double>(s.xgrid.n)};
    const double mu = s.ray.mu;
    const double nu = s.ray.nu + mu * t;
    for (int i = 0; i < s.xgrid.n; ++i)
      es.values[i] = std::max(0.0, view.eval(s.xgrid.point(i), mu, nu));
    if (std::abs(es.integral() - 1.0) > norm_tol)
      throw SupportLeavesGridError(
          "evolve_tomogram: sheared ray not representable on stored slices");
    out.slices.push_back(std::move(es));
  }
  return out;
}

namespace detail {

/// Index of a (mu, nu) lattice underlying a ray set.
struct RayLattice {
  std::vector<double> mus, nus;
  std::vector<int> slice_index;  // [imu * nnu + inu] -> slice, -1 if absent

  explicit RayLattice(const TomogramField& w) {
    auto collect = [](const TomogramField& f, bool take_mu) {
      std::vector<double> v;
      for (const auto& s : f.slices)
        v.push_back(take_mu ? s.ray.mu : s.ray.nu);
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end(),
                          [](double a, double b) {
                            return std::abs(a - b) < 1e-12;
                          }),
              v.end());
      return v;
    };
    mus = collect(w, true);
    nus = collect(w, false);
    slice_index.assign(mus.size() * nus.size(), -1);
    for (std::size_t k = 0; k < w.slices.size(); ++k) {
      const auto& r = w.slices[k].ray;
      const auto im = std::lower_bound(mus.begin(), mus.end(), r.mu - 1e-12) -
                      mus.begin();
      const auto in = std::lower_bound(nus.begin(), nus.end(), r.nu - 1e-12) -
                      nus.begin();
      slice_index[im * nus.size() + in] = static_cast<int>(k);
    }
  }

  const TomogramSlice& slice(const TomogramField& w, std::size_t im,
                             std::size_t in) const {
    const int k = slice_index[im * nus.size() + in];
    if (k < 0)
      throw InsufficientSamplingError("ray lattice has missing entries");
    return w.slices[k];
  }

  static double uniform_spacing(const std::vector<double>& v,
                                const char* what) {
    if (v.size() < 3)
      throw InsufficientSamplingError(std::string("need >= 3 distinct ") +
                                      what + " values for differencing");
    const double d = v[1] - v[0];
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
      if (std::abs(v[i + 1] - v[i] - d) > 1e-9)
        throw InsufficientSamplingError(std::string(what) +
                                        " values are not uniformly spaced");
    return d;
  }
};

}  // namespace detail

/// Max residual of [d/dt - mu d/dnu] W = 0 over a trajectory of tomogram
/// fields sampled at uniform dt, whose rays form a (mu, nu) lattice with
/// uniform nu spacing. Centered second-order differences.
inline double free_kinetic_residual(const std::vector<TomogramField>& traj) {
  if (traj.size() < 3)
    throw InsufficientSamplingError(
        "free_kinetic_residual: need >= 3 time samples");
  const double dt = traj[1].time - traj[0].time;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i)
    if (std::abs(traj[i + 1].time - traj[i].time - dt) > 1e-12)
      throw InsufficientSamplingError(
          "free_kinetic_residual: time samples not uniform");
  detail::RayLattice lat(traj.front());
  const double dnu = detail::RayLattice::uniform_spacing(lat.nus, "nu");
  double worst = 0.0;
  for (std::size_t it = 1; it + 1 < traj.size(); ++it) {
    for (std::size_t im = 0; im < lat.mus.size(); ++im) {
      const double mu = lat.mus[im];
      for (std::size_t in = 1; in + 1 < lat.nus.size(); ++in) {
        const auto& plus_t = lat.slice(traj[it + 1], im, in);
        const auto& minus_t = lat.slice(traj[it - 1], im, in);
        const auto& plus_n = lat.slice(traj[it], im, in + 1);
        const auto& minus_n = lat.slice(traj[it], im, in - 1);
        const int nx = plus_t.xgrid.n;
        for (int ix = 0; ix < nx; ++ix) {
          const double ddt =
              (plus_t.values[ix] - minus_t.values[ix]) / (2.0 * dt);
          const double ddn =
              (plus_n.values[ix] - minus_n.values[ix]) / (2.0 * dnu);
          worst = std::max(worst, std::abs(ddt - mu * ddn));
        }
      }
    }
  }
  return worst;
}

/// Max residual of the homogeneity constraint
/// [X d/dX + mu d/dmu + nu d/dnu + 1] W = 0 on a sampled (mu, nu) lattice.
inline double scaling_constraint_residual(const TomogramField& w) {
  detail::RayLattice lat(w);
  const double dmu = detail::RayLattice::uniform_spacing(lat.mus, "mu");
  const double dnu = detail::RayLattice::uniform_spacing(lat.nus, "nu");
  double worst = 0.0;
  for (std::size_t im = 1; im + 1 < lat.mus.size(); ++im) {
    for (std::size_t in = 1; in + 1 < lat.nus.size(); ++in) {
      const auto& c = lat.slice(w, im, in);
      const auto& pm = lat.slice(w, im + 1, in);
      const auto& mm = lat.slice(w, im - 1, in);
      const auto& pn = lat.slice(w, im, in + 1);
      const auto& mn = lat.slice(w, im, in - 1);
      const double dx = c.xgrid.step();
      for (int ix = 1; ix + 1 < c.xgrid.n; ++ix) {
        const double x = c.xgrid.point(ix);
        const double wx = (c.values[ix + 1] - c.values[ix - 1]) / (2.0 * dx);
        const double wmu = (pm.values[ix] - mm.values[ix]) / (2.0 * dmu);
        const double wnu = (pn.values[ix] - mn.values[ix]) / (2.0 * dnu);
        const double res = x * wx + lat.mus[im] * wmu + lat.nus[in] * wnu +
                           c.values[ix];
        worst = std::max(worst, std::abs(res));
      }
    }
  }
  return worst;
}

/// Analytic-branch scaling residual: closed-form partial derivatives of the
/// Gaussian tomogram. Vanishes to machine precision for any valid state.
inline double scaling_constraint_residual(const GaussianTomogram& g,
                                          const RaySet& rays,
                                          const Grid1D& xgrid) {
  double worst = 0.0;
  for (const Ray& ray : rays) {
    ray.validate();
    const auto& p = g.params;
    const double var = sigma_xx(g, ray);
    const double mean = ray.mu * p.qbar + ray.nu * p.pbar;
    const double dvar_dmu = 2.0 * ray.mu * p.sqq + 2.0 * ray.nu * p.sqp;
    const double dvar_dnu = 2.0 * ray.nu * p.spp + 2.0 * ray.mu * p.sqp;
    for (int ix = 0; ix < xgrid.n; ++ix) {
      const double x = xgrid.point(ix);
      const double d = x - mean;
      const double w = gaussian_tomogram_eval(g, ray, x);
      const double wx = -d / var * w;
      auto dparam = [&](double dmean, double dvar) {
        return w * (-0.5 * dvar / var + d * dmean / var +
                    0.5 * d * d * dvar / (var * var));
      };
      const double wmu = dparam(p.qbar, dvar_dmu);
      const double wnu = dparam(p.pbar, dvar_dnu);
      const double res =
          x * wx + ray.mu * wmu + ray.nu * wnu + w;
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

}  // namespace tomokit
