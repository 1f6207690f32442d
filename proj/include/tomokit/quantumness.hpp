#pragma once

// Tomographic statistics, the Schroedinger-Robertson test, the
// Weyl-Heisenberg group function and its positive-type (Naimark) test, and
// the classical / quantum classification of a tomogram.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "tomokit/dynamics.hpp"
#include "tomokit/errors.hpp"
#include "tomokit/grid.hpp"
#include "tomokit/states.hpp"
#include "tomokit/tomography.hpp"

namespace tomokit {

struct CovarianceRecord {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double sqq = 0.0;
  double spp = 0.0;
  double sqp = 0.0;
  std::string source;
};

/// <X^n> of a sampled slice by quadrature; n <= 4 (higher moments amplify
/// tail truncation). Errors out when the estimated truncated tail mass,
/// weighted by X^n at the grid edge, exceeds tail_tol.
inline double tomographic_moment(const TomogramSlice& w, int n,
                                 double tail_tol = 1e-6) {
  if (n < 0 || n > 4)
    throw Error("tomographic_moment: sampled slices support 0 <= n <= 4");
  const double dx = w.xgrid.step();
  const double edge = std::max(std::abs(w.xgrid.min), std::abs(w.xgrid.max));
  const double tail = (w.values.front() + w.values.back()) * dx;
  if (tail * std::pow(edge, n) > tail_tol)
    throw TailTruncationError("tomographic_moment: slice tails truncated");
  std::vector<double> integrand(w.values.size());
  for (int i = 0; i < w.xgrid.n; ++i)
    integrand[i] = std::pow(w.xgrid.point(i), n) * w.values[i];
  return trapezoid_sum(integrand, dx);
}

/// Closed-form normal moments of the analytic Gaussian branch.
inline double tomographic_moment(const GaussianTomogram& g, const Ray& ray,
                                 int n) {
  if (n < 0 || n > 4) throw Error("tomographic_moment: need 0 <= n <= 4");
  const double m = ray.mu * g.params.qbar + ray.nu * g.params.pbar;
  const double v = sigma_xx(g, ray);
  switch (n) {
    case 0: return 1.0;
    case 1: return m;
    case 2: return m * m + v;
    case 3: return m * m * m + 3.0 * m * v;
    default: return m * m * m * m + 6.0 * m * m * v + 3.0 * v * v;
  }
}

namespace detail {

inline double slice_variance(const TomogramSlice& s) {
  const double m1 = tomographic_moment(s, 1);
  return tomographic_moment(s, 2) - m1 * m1;
}

inline const TomogramSlice& find_ray(const TomogramField& w, double mu,
                                     double nu) {
  for (const auto& s : w.slices)
    if (std::abs(s.ray.mu - mu) < 1e-9 && std::abs(s.ray.nu - nu) < 1e-9)
      return s;
  throw MissingRayError("tomogram field lacks required ray (" +
                        std::to_string(mu) + ", " + std::to_string(nu) + ")");
}

}  // namespace detail

/// Means and covariances from the axis rays plus the theta = pi/4 slice:
/// Var at (1,1) is 2x the unit-ray variance by homogeneity, and
/// sigma_XX(1,1) = sqq + spp + 2 sqp pins the covariance.
inline CovarianceRecord covariance_from_tomogram(const TomogramField& w) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const auto& s_q = detail::find_ray(w, 1.0, 0.0);
  const auto& s_p = detail::find_ray(w, 0.0, 1.0);
  const auto& s_d = detail::find_ray(w, inv_sqrt2, inv_sqrt2);
  CovarianceRecord c;
  c.source = "sampled-tomogram";
  c.mean_q = tomographic_moment(s_q, 1);
  c.mean_p = tomographic_moment(s_p, 1);
  c.sqq = detail::slice_variance(s_q);
  c.spp = detail::slice_variance(s_p);
  const double var11 = 2.0 * detail::slice_variance(s_d);
  c.sqp = 0.5 * (var11 - c.sqq - c.spp);
  return c;
}

inline CovarianceRecord covariance_from_tomogram(const GaussianTomogram& g) {
  return CovarianceRecord{g.params.qbar, g.params.pbar, g.params.sqq,
                          g.params.spp, g.params.sqp, "gaussian-analytic"};
}

struct SrResult {
  double lhs = 0.0;
  bool ok = false;
};

/// Schroedinger-Robertson test: sqq*spp - sqp^2 >= 1/4 (hbar = 1).
inline SrResult sr_test(const CovarianceRecord& c, double tol = 1e-9) {
  const double lhs = c.sqq * c.spp - c.sqp * c.sqp;
  return SrResult{lhs, lhs >= 0.25 - tol};
}

/// Weyl-Heisenberg element: U(mu, nu, tau) = e^{i tau} e^{i(mu q + nu p)}.
struct WHElement {
  double mu = 0.0;
  double nu = 0.0;
  double tau = 0.0;
};

/// Group law from [q,p] = i:
/// U(a) U(b) = U(ma+mb, na+nb, ta+tb + (ma*nb - na*mb)/2).
inline WHElement wh_compose(const WHElement& a, const WHElement& b) {
  return WHElement{a.mu + b.mu, a.nu + b.nu,
                   a.tau + b.tau + 0.5 * (a.mu * b.nu - a.nu * b.mu)};
}

inline WHElement wh_inverse(const WHElement& a) {
  return WHElement{-a.mu, -a.nu, -a.tau};
}

/// phi(mu, nu, tau) = e^{i tau} Integral e^{iX} W(X, mu, nu) dX.
inline cplx group_function(const GaussianTomogram& g, const WHElement& e) {
  const cplx phase(std::cos(e.tau), std::sin(e.tau));
  return phase * classical_characteristic(g.params, e.mu, e.nu);
}

inline cplx group_function(const TomogramField& w, const WHElement& e) {
  const cplx phase(std::cos(e.tau), std::sin(e.tau));
  if (e.mu == 0.0 && e.nu == 0.0) return phase;  // W(X,0,0) = delta(X)
  detail::UnitCircleView view(w);
  const double r = std::hypot(e.mu, e.nu);
  if (r >= std::numbers::pi / view.xgrid.step())
    throw UnreachableRayError("group_function: |(mu,nu)| beyond resolvable k");
  // phi = chi_theta(r) = Integral e^{i r Y} W_u(Y, theta) dY, with the unit
  // slice W_u obtained from the stored set by angular interpolation
  const int nx = view.xgrid.n;
  const double inv_r = 1.0 / r;
  std::vector<cplx> integrand(nx);
  for (int i = 0; i < nx; ++i) {
    const double y = view.xgrid.point(i);
    const double wv = view.eval(y, e.mu * inv_r, e.nu * inv_r);
    integrand[i] = wv * cplx(std::cos(r * y), std::sin(r * y));
  }
  return phase * trapezoid_sum(integrand, view.xgrid.step());
}

struct PtResult {
  double min_eig = 0.0;
  bool ok = false;
};

/// Regular (mu, nu) lattice of WH elements with tau = 0; tau only
/// contributes the exactly known phase e^{i tau}, so sampling it adds no
/// information.
inline std::vector<WHElement> wh_lattice(int side, double half) {
  std::vector<WHElement> e;
  e.reserve(static_cast<std::size_t>(side) * side);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      const double mu = side == 1 ? 0.0 : -half + 2.0 * half * i / (side - 1);
      const double nu = side == 1 ? 0.0 : -half + 2.0 * half * j / (side - 1);
      e.push_back(WHElement{mu, nu, 0.0});
    }
  return e;
}

namespace detail {

template <typename W>
PtResult positive_type_impl(const W& w, const std::vector<WHElement>& els,
                            double tol) {
  const int n = static_cast<int>(els.size());
  if (n < 1) throw Error("positive_type_test: need >= 1 element");
  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      const cplx v = group_function(w, wh_compose(wh_inverse(els[j]), els[k]));
      m(j, k) = v;
      m(k, j) = std::conj(v);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const double min_eig = es.eigenvalues().minCoeff();
  return PtResult{min_eig, min_eig >= -tol};
}

}  // namespace detail

/// Naimark positive-type test: minimum eigenvalue of the Gram matrix
/// M(j,k) = phi(g_j^-1 g_k). A negative eigenvalue certifies that no
/// quantum state has this tomogram; nonnegativity certifies it only on the
/// sampled lattice.
inline PtResult positive_type_test(const GaussianTomogram& g,
                                   const std::vector<WHElement>& els,
                                   double tol = 1e-6) {
  return detail::positive_type_impl(g, els, tol);
}

inline PtResult positive_type_test(const TomogramField& w,
                                   const std::vector<WHElement>& els,
                                   double tol = 1e-6) {
  return detail::positive_type_impl(w, els, tol);
}

enum class Verdict { classical_only, quantum_admissible, indeterminate,
                     invalid };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::classical_only: return "classical-only";
    case Verdict::quantum_admissible: return "quantum-admissible";
    case Verdict::indeterminate: return "indeterminate";
    default: return "invalid";
  }
}

struct ClassificationReport {
  bool nonneg_ok = false;
  bool norm_ok = false;
  double homogeneity_residual = 0.0;
  double sr_lhs = 0.0;
  bool sr_ok = false;
  double pt_min_eigenvalue = 0.0;
  bool pt_ok = false;
  Verdict verdict = Verdict::invalid;
};

struct ClassifyConfig {
  int lattice_side = 7;
  double lattice_half = 2.0;
  int refined_side = 13;
  double refined_half = 3.0;
  bool refine = true;  ///< without refinement a pt pass is only indeterminate
  double pt_tol = 1e-6;
  double sr_tol = 1e-9;
  // sampled tomograms sit on a quadrature/interpolation noise floor well
  // above the analytic tolerances
  double pt_tol_sampled = 1e-4;
  double sr_tol_sampled = 1e-4;
  double nonneg_tol = 1e-9;
  double norm_tol = 1e-6;
};

namespace detail {

template <typename W>
ClassificationReport classify_impl(const W& w, const CovarianceRecord& cov,
                                   bool nonneg_ok, bool norm_ok,
                                   double homogeneity_residual,
                                   const ClassifyConfig& cfg) {
  ClassificationReport r;
  r.nonneg_ok = nonneg_ok;
  r.norm_ok = norm_ok;
  r.homogeneity_residual = homogeneity_residual;
  const SrResult sr = sr_test(cov, cfg.sr_tol);
  r.sr_lhs = sr.lhs;
  r.sr_ok = sr.ok;
  PtResult pt = positive_type_impl(
      w, wh_lattice(cfg.lattice_side, cfg.lattice_half), cfg.pt_tol);
  bool refined = false;
  if (pt.ok && cfg.refine) {
    pt = positive_type_impl(
        w, wh_lattice(cfg.refined_side, cfg.refined_half), cfg.pt_tol);
    refined = true;
  }
  r.pt_min_eigenvalue = pt.min_eig;
  r.pt_ok = pt.ok;
  if (!r.nonneg_ok || !r.norm_ok)
    r.verdict = Verdict::invalid;
  else if (!r.sr_ok || !r.pt_ok)
    r.verdict = Verdict::classical_only;
  else if (refined)
    r.verdict = Verdict::quantum_admissible;
  else
    r.verdict = Verdict::indeterminate;
  return r;
}

}  // namespace detail

inline ClassificationReport classify(const GaussianTomogram& g,
                                     const ClassifyConfig& cfg = {}) {
  g.params.validate();
  // analytic scaling residual, sampled on a small probe set
  const Grid1D probe = make_uniform_grid(-6.0, 6.0, 121);
  RaySet rays;
  for (double mu : {0.9, 1.0, 1.1})
    for (double nu : {-0.1, 0.0, 0.1}) rays.push_back(Ray{mu, nu});
  const double res = scaling_constraint_residual(g, rays, probe);
  return detail::classify_impl(g, covariance_from_tomogram(g), true, true,
                               res, cfg);
}

inline ClassificationReport classify(const TomogramField& w,
                                     const ClassifyConfig& cfg = {}) {
  bool nonneg = true;
  bool norm = true;
  for (const auto& s : w.slices) {
    for (double v : s.values)
      if (v < -cfg.nonneg_tol) nonneg = false;
    if (std::abs(s.integral() - 1.0) > cfg.norm_tol) norm = false;
  }
  double res = 0.0;
  if (nonneg && norm) {
    // homogeneity residual on a small lattice synthesized from the field
    detail::UnitCircleView view(w);
    const double h = 0.05;
    TomogramField lat;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b) {
        const double mu = 1.0 + a * h, nu = b * h;
        TomogramSlice s{Ray{mu, nu}, view.xgrid,
                        std::vector<double>(view.xgrid.n)};
        for (int i = 0; i < view.xgrid.n; ++i)
          s.values[i] = view.eval(view.xgrid.point(i), mu, nu);
        lat.slices.push_back(std::move(s));
      }
    res = scaling_constraint_residual(lat);
  }
  CovarianceRecord cov{};
  if (nonneg && norm) cov = covariance_from_tomogram(w);
  ClassifyConfig sampled_cfg = cfg;
  sampled_cfg.sr_tol = cfg.sr_tol_sampled;
  sampled_cfg.pt_tol = cfg.pt_tol_sampled;
  ClassificationReport r =
      detail::classify_impl(w, cov, nonneg, norm, res, sampled_cfg);
  return r;
}

}  // namespace tomokit
