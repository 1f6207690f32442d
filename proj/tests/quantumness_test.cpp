#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "tomokit/dynamics.hpp"
#include "tomokit/quantumness.hpp"

using namespace tomokit;

namespace {

const GaussianParams kVacuum{0.0, 0.0, 0.5, 0.5, 0.0};

TomogramField three_ray_field(const GaussianParams& g, const Grid1D& xgrid) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  GaussianTomogram gt{g, 0.0};
  TomogramField w;
  for (const Ray& r :
       {Ray{1, 0}, Ray{0, 1}, Ray{inv_sqrt2, inv_sqrt2}})
    w.slices.push_back(gaussian_tomogram_slice(gt, r, xgrid));
  return w;
}

}  // namespace

TEST(Moments, NormalizationAndClosedForms) {
  GaussianTomogram vac{kVacuum, 0.0};
  const Ray unit{1, 0};
  EXPECT_DOUBLE_EQ(tomographic_moment(vac, unit, 0), 1.0);
  EXPECT_DOUBLE_EQ(tomographic_moment(vac, unit, 2), 0.5);

  GaussianTomogram g{GaussianParams{0.7, -0.2, 0.6, 0.8, 0.1}, 0.0};
  const Ray ray{0.5, 1.5};
  const double mean = 0.5 * 0.7 + 1.5 * (-0.2);
  EXPECT_NEAR(tomographic_moment(g, ray, 1), mean, 1e-14);

  // sampled slice agrees with the closed forms
  const TomogramSlice s =
      gaussian_tomogram_slice(g, ray, make_uniform_grid(-12, 12, 1024));
  EXPECT_NEAR(tomographic_moment(s, 0), 1.0, 1e-9);
  for (int n = 1; n <= 4; ++n)
    EXPECT_NEAR(tomographic_moment(s, n), tomographic_moment(g, ray, n), 1e-6);
  EXPECT_THROW(tomographic_moment(s, 5), Error);
}

TEST(Moments, TailTruncation) {
  GaussianTomogram vac{kVacuum, 0.0};
  const TomogramSlice narrow =
      gaussian_tomogram_slice(vac, Ray{1, 0}, make_uniform_grid(-1.5, 1.5, 64));
  EXPECT_THROW(tomographic_moment(narrow, 2), TailTruncationError);
}

TEST(Covariance, VacuumAndSampledRoundTrip) {
  const CovarianceRecord v =
      covariance_from_tomogram(GaussianTomogram{kVacuum, 0.0});
  EXPECT_DOUBLE_EQ(v.sqq, 0.5);
  EXPECT_DOUBLE_EQ(v.spp, 0.5);
  EXPECT_DOUBLE_EQ(v.sqp, 0.0);

  GaussianParams sub{0.0, 0.0, 0.4, 0.4, 0.0};
  const CovarianceRecord c = covariance_from_tomogram(
      three_ray_field(sub, make_uniform_grid(-6, 6, 256)));
  EXPECT_NEAR(c.mean_q, 0.0, 1e-4);
  EXPECT_NEAR(c.mean_p, 0.0, 1e-4);
  EXPECT_NEAR(c.sqq, 0.4, 1e-4);
  EXPECT_NEAR(c.spp, 0.4, 1e-4);
  EXPECT_NEAR(c.sqp, 0.0, 1e-4);
}

TEST(Covariance, ShearedVacuum) {
  const GaussianParams moved = evolve_classical(kVacuum, 1.0);
  const CovarianceRecord c = covariance_from_tomogram(
      three_ray_field(moved, make_uniform_grid(-8, 8, 512)));
  EXPECT_NEAR(c.sqp, 0.5, 1e-4);
  EXPECT_NEAR(c.sqq, 1.0, 1e-4);
}

TEST(Covariance, MissingRay) {
  TomogramField w;
  w.slices.push_back(gaussian_tomogram_slice(GaussianTomogram{kVacuum, 0.0},
                                             Ray{1, 0},
                                             make_uniform_grid(-6, 6, 128)));
  EXPECT_THROW(covariance_from_tomogram(w), MissingRayError);
}

TEST(SrTest, KnownCases) {
  const SrResult boundary = sr_test(CovarianceRecord{0, 0, 0.5, 0.5, 0.0, ""});
  EXPECT_DOUBLE_EQ(boundary.lhs, 0.25);
  EXPECT_TRUE(boundary.ok);
  const SrResult sub = sr_test(CovarianceRecord{0, 0, 0.4, 0.4, 0.0, ""});
  EXPECT_DOUBLE_EQ(sub.lhs, 0.16);
  EXPECT_FALSE(sub.ok);
  const SrResult wide = sr_test(CovarianceRecord{0, 0, 1.0, 1.0, 0.3, ""});
  EXPECT_DOUBLE_EQ(wide.lhs, 0.91);
  EXPECT_TRUE(wide.ok);
}

TEST(WhGroup, ComposeInverseAssociativity) {
  const WHElement a{1, 0, 0}, b{0, 1, 0};
  const WHElement ab = wh_compose(a, b);
  EXPECT_DOUBLE_EQ(ab.mu, 1.0);
  EXPECT_DOUBLE_EQ(ab.nu, 1.0);
  EXPECT_DOUBLE_EQ(ab.tau, 0.5);
  const WHElement ba = wh_compose(b, a);
  EXPECT_DOUBLE_EQ(ba.tau, -0.5);

  const WHElement e = wh_compose(a, wh_inverse(a));
  EXPECT_DOUBLE_EQ(e.mu, 0.0);
  EXPECT_DOUBLE_EQ(e.nu, 0.0);
  EXPECT_DOUBLE_EQ(e.tau, 0.0);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const WHElement x{u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)},
        z{u(rng), u(rng), u(rng)};
    const WHElement l = wh_compose(wh_compose(x, y), z);
    const WHElement r = wh_compose(x, wh_compose(y, z));
    EXPECT_NEAR(l.mu, r.mu, 1e-14);
    EXPECT_NEAR(l.nu, r.nu, 1e-14);
    EXPECT_NEAR(l.tau, r.tau, 1e-14);
  }
}

TEST(WhGroup, LawMatchesMatrixExponentials) {
  // validate the composition law against exp(i(mu q + nu p)) built in a
  // truncated oscillator basis; the tau phase convention pairs with
  // q p - p q = -i (momentum as +i d/dx)
  const int dim = 40, block = 20;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) a(n, n + 1) = std::sqrt(n + 1.0);
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd q = (a + ad) / std::sqrt(2.0);
  const Eigen::MatrixXcd p = cplx(0, 1) * (a - ad) / std::sqrt(2.0);
  auto unitary = [&](const WHElement& e) {
    Eigen::MatrixXcd gen = cplx(0, 1) * (e.mu * q + e.nu * p);
    Eigen::MatrixXcd u = gen.exp();
    return (cplx(std::cos(e.tau), std::sin(e.tau)) * u).eval();
  };
  const std::vector<std::pair<WHElement, WHElement>> cases{
      {{1, 0, 0}, {0, 1, 0}},
      {{0.5, -0.3, 0.2}, {-0.7, 0.4, 1.1}},
      {{0.9, 0.9, -0.4}, {0.2, -1.0, 0.0}}};
  for (const auto& [x, y] : cases) {
    const Eigen::MatrixXcd lhs = unitary(x) * unitary(y);
    const Eigen::MatrixXcd rhs = unitary(wh_compose(x, y));
    const double err =
        (lhs.topLeftCorner(block, block) - rhs.topLeftCorner(block, block))
            .cwiseAbs()
            .maxCoeff();
    EXPECT_LT(err, 1e-8);
  }
}

TEST(GroupFunction, GaussianBranch) {
  GaussianTomogram vac{kVacuum, 0.0};
  EXPECT_NEAR(std::abs(group_function(vac, WHElement{0, 0, 0}) - 1.0), 0.0,
              1e-15);
  for (double mu : {0.0, 0.7, -1.2}) {
    for (double nu : {0.5, -0.9}) {
      const cplx v = group_function(vac, WHElement{mu, nu, 0});
      EXPECT_NEAR(v.real(), std::exp(-(mu * mu + nu * nu) / 4.0), 1e-12);
      EXPECT_NEAR(v.imag(), 0.0, 1e-12);
    }
  }
  // tau contributes the exact phase
  const cplx w = group_function(vac, WHElement{0.3, 0.4, 1.2});
  EXPECT_NEAR(std::arg(w), 1.2, 1e-12);
}

TEST(GroupFunction, SampledFieldAndConjSymmetry) {
  const TomogramField w = radon_classical(
      kVacuum, unit_circle_rays(128), make_uniform_grid(-8, 8, 257));
  for (double mu : {0.4, -0.8}) {
    for (double nu : {0.6, -0.2}) {
      const WHElement g{mu, nu, 0.0};
      const cplx v = group_function(w, g);
      EXPECT_NEAR(std::abs(v - std::exp(-(mu * mu + nu * nu) / 4.0)), 0.0,
                  1e-5);
      const cplx vi = group_function(w, wh_inverse(g));
      EXPECT_NEAR(std::abs(vi - std::conj(v)), 0.0, 1e-10);
    }
  }
  EXPECT_THROW(group_function(w, WHElement{60.0, 0.0, 0.0}),
               UnreachableRayError);
}

TEST(PositiveType, VacuumLatticePasses) {
  GaussianTomogram vac{kVacuum, 0.0};
  const PtResult r = positive_type_test(vac, wh_lattice(5, 1.0));
  EXPECT_GE(r.min_eig, -1e-9);
  EXPECT_TRUE(r.ok);
}

TEST(PositiveType, SubHeisenbergGaussianFails) {
  GaussianTomogram sub{GaussianParams{0, 0, 0.1, 0.1, 0.0}, 0.0};
  const PtResult r = positive_type_test(sub, wh_lattice(5, 1.0));
  EXPECT_LT(r.min_eig, -1e-3);
  EXPECT_FALSE(r.ok);
}

TEST(PositiveType, SingleElementAndMonotonicity) {
  GaussianTomogram vac{kVacuum, 0.0};
  const PtResult one =
      positive_type_test(vac, std::vector<WHElement>{WHElement{0, 0, 0}});
  EXPECT_NEAR(one.min_eig, 1.0, 1e-14);

  GaussianTomogram sub{GaussianParams{0, 0, 0.3, 0.3, 0.0}, 0.0};
  double prev = 1.0;
  // sides chosen so each lattice contains the previous one
  for (int side : {2, 3, 5, 9}) {
    const PtResult r = positive_type_test(sub, wh_lattice(side, 2.0));
    EXPECT_LE(r.min_eig, prev + 1e-12);  // interlacing
    prev = r.min_eig;
  }
}

TEST(PositiveType, AgreesWithSrOnGaussianFamily) {
  for (int k = 0; k <= 12; ++k) {
    const double s2 = 0.25 + 0.05 * k;  // variance from 0.25 to 0.85
    GaussianTomogram g{GaussianParams{0, 0, s2, s2, 0.0}, 0.0};
    const double lhs = s2 * s2;
    if (std::abs(lhs - 0.25) <= 1e-3) continue;
    const bool sr_ok = sr_test(covariance_from_tomogram(g)).ok;
    PtResult pt = positive_type_test(g, wh_lattice(7, 2.0));
    if (pt.ok != sr_ok) pt = positive_type_test(g, wh_lattice(13, 3.0));
    EXPECT_EQ(pt.ok, sr_ok) << "s2 = " << s2;
  }
}

TEST(Classify, GaussianVerdicts) {
  const ClassificationReport vac =
      classify(GaussianTomogram{kVacuum, 0.0});
  EXPECT_EQ(vac.verdict, Verdict::quantum_admissible);
  EXPECT_TRUE(vac.sr_ok);
  EXPECT_TRUE(vac.pt_ok);
  EXPECT_LT(vac.homogeneity_residual, 1e-10);

  const ClassificationReport sub =
      classify(GaussianTomogram{GaussianParams{0, 0, 0.4, 0.4, 0.0}, 0.0});
  EXPECT_EQ(sub.verdict, Verdict::classical_only);
  EXPECT_NEAR(sub.sr_lhs, 0.16, 1e-12);

  ClassifyConfig no_refine;
  no_refine.refine = false;
  const ClassificationReport coarse =
      classify(GaussianTomogram{kVacuum, 0.0}, no_refine);
  EXPECT_EQ(coarse.verdict, Verdict::indeterminate);
}

TEST(Classify, VerdictInvariantUnderFreeEvolution) {
  for (double t : {0.0, 0.5, 1.0, 5.0}) {
    const GaussianTomogram vac_t =
        evolve_tomogram(GaussianTomogram{kVacuum, 0.0}, t);
    EXPECT_EQ(classify(vac_t).verdict, Verdict::quantum_admissible) << t;
    const GaussianTomogram sub_t = evolve_tomogram(
        GaussianTomogram{GaussianParams{0, 0, 0.4, 0.4, 0.0}, 0.0}, t);
    EXPECT_EQ(classify(sub_t).verdict, Verdict::classical_only) << t;
  }
}

TEST(Classify, SampledFields) {
  const Grid1D xgrid = make_uniform_grid(-8.0, 8.0, 257);
  const TomogramField vac =
      radon_classical(kVacuum, unit_circle_rays(128), xgrid);
  const ClassificationReport rv = classify(vac);
  EXPECT_EQ(rv.verdict, Verdict::quantum_admissible);

  const TomogramField sub = radon_classical(
      GaussianParams{0, 0, 0.4, 0.4, 0.0}, unit_circle_rays(128), xgrid);
  const ClassificationReport rs = classify(sub);
  EXPECT_EQ(rs.verdict, Verdict::classical_only);

  TomogramField broken = vac;
  broken.slices[5].values[100] = -0.05;
  const ClassificationReport rb = classify(broken);
  EXPECT_EQ(rb.verdict, Verdict::invalid);
  EXPECT_FALSE(rb.nonneg_ok);
}
