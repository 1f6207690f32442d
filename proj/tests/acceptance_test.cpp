// End-to-end acceptance checks. Each test prints a single PASS/FAIL line so
// the suite doubles as a release gate report.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "tomokit/tomokit.hpp"

using namespace tomokit;

namespace {

const GaussianParams kVacuum{0.0, 0.0, 0.5, 0.5, 0.0};

Grid2D square_grid(double half, int n) {
  return Grid2D{make_uniform_grid(-half, half, n),
                make_uniform_grid(-half, half, n)};
}

void report(int criterion, const std::string& name, bool pass) {
  std::cout << "ACCEPTANCE " << criterion << " (" << name
            << "): " << (pass ? "PASS" : "FAIL") << std::endl;
  EXPECT_TRUE(pass) << "criterion " << criterion << " (" << name << ")";
}

double l1_distance(const PhaseSpaceField& a, const PhaseSpaceField& b) {
  double acc = 0.0;
  const Grid2D& grid = a.grid;
  for (int i = 0; i < grid.gq.n; ++i) {
    const double wq = (i == 0 || i == grid.gq.n - 1) ? 0.5 : 1.0;
    for (int j = 0; j < grid.gp.n; ++j) {
      const double wp = (j == 0 || j == grid.gp.n - 1) ? 0.5 : 1.0;
      acc += wq * wp * std::abs(a.at(i, j) - b.at(i, j));
    }
  }
  return acc * grid.gq.step() * grid.gp.step();
}

double max_slice_diff(const TomogramSlice& a, const TomogramSlice& b) {
  double worst = 0.0;
  for (int i = 0; i < a.xgrid.n; ++i)
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  return worst;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST(Acceptance, C1_RadonRoundTrip) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> mean(-1.0, 1.0);
  std::uniform_real_distribution<double> var(0.3, 1.2);
  std::uniform_real_distribution<double> frac(-0.5, 0.5);
  const Grid2D grid = square_grid(8, 256);
  const Grid1D xgrid = make_uniform_grid(-12.0, 12.0, 512);
  const RaySet rays = unit_circle_rays(128);
  double worst_l1 = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    GaussianParams g;
    g.qbar = mean(rng);
    g.pbar = mean(rng);
    g.sqq = var(rng);
    g.spp = var(rng);
    g.sqp = frac(rng) * std::sqrt(g.sqq * g.spp);
    const PhaseSpaceField f = gaussian_phase_density(g, grid);
    const PhaseSpaceField back =
        inverse_radon(radon_classical(f, rays, xgrid), grid);
    worst_l1 = std::max(worst_l1, l1_distance(f, back));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(1, "radon round trip", worst_l1 < 1e-3 && secs < 30.0);
  std::cout << "  worst L1 " << worst_l1 << ", " << secs << " s\n";
}

TEST(Acceptance, C2_DensityReconstruction) {
  const Grid1D qgrid = make_uniform_grid(-8.0, 8.0, 256);
  const Grid1D xgrid = make_uniform_grid(-10.0, 10.0, 512);
  const RaySet rays = unit_circle_rays(128);

  const ReconstructionResult ground =
      reconstruct_density(radon_classical(kVacuum, rays, xgrid), qgrid);
  const DensityMatrix exact =
      density_from_wavefunction(gaussian_wavefunction(kVacuum, qgrid));
  cplx fid = 0.0;
  for (int i = 0; i < qgrid.n; ++i)
    for (int j = 0; j < qgrid.n; ++j)
      fid += ground.rho.at(i, j) * exact.at(j, i);
  fid *= qgrid.step() * qgrid.step();

  const ReconstructionResult classical = reconstruct_density(
      radon_classical(GaussianParams{0, 0, 0.4, 0.4, 0}, rays, xgrid), qgrid);

  const bool pass = fid.real() > 0.999 && ground.physical &&
                    !classical.physical && classical.min_eigenvalue < -1e-3;
  report(2, "density reconstruction", pass);
  std::cout << "  fidelity " << fid.real() << ", classical min eig "
            << classical.min_eigenvalue << "\n";
}

TEST(Acceptance, C3_PropagatorEquivalence) {
  const auto start = std::chrono::steady_clock::now();
  const RaySet rays = unit_circle_rays(128);
  const std::vector<int> test_angles{10, 40, 64, 100};
  const std::vector<double> times{0.25, 0.5, 1.0};

  // quantum: evolving the density then transforming equals shearing the
  // initial tomogram
  const Grid1D qgrid = make_uniform_grid(-8.0, 8.0, 257);
  GaussianParams moving{-0.3, 0.4, 0.5, 0.5, 0.0};
  const DensityMatrix rho0 =
      density_from_wavefunction(gaussian_wavefunction(moving, qgrid));
  const TomogramField w0q = tomogram_quantum(rho0, rays, qgrid);
  double worst_q = 0.0;
  for (double t : times) {
    const TomogramField sheared = evolve_tomogram(w0q, t);
    const DensityMatrix rho_t = evolve_density(rho0, t);
    RaySet subset;
    for (int idx : test_angles) subset.push_back(rays[idx]);
    const TomogramField direct = tomogram_quantum(rho_t, subset, qgrid);
    for (std::size_t k = 0; k < subset.size(); ++k)
      worst_q = std::max(worst_q, max_slice_diff(sheared.slices[test_angles[k]],
                                                 direct.slices[k]));
  }

  // classical analogue
  const Grid2D grid = square_grid(8, 256);
  GaussianParams gc{0.2, -0.3, 0.7, 0.5, 0.1};
  const PhaseSpaceField f0 = gaussian_phase_density(gc, grid);
  const Grid1D xgrid = make_uniform_grid(-10.0, 10.0, 512);
  const TomogramField w0c = radon_classical(f0, rays, xgrid);
  double worst_c = 0.0;
  for (double t : times) {
    const TomogramField sheared = evolve_tomogram(w0c, t);
    const PhaseSpaceField f_t = evolve_classical(f0, t);
    RaySet subset;
    for (int idx : test_angles) subset.push_back(rays[idx]);
    const TomogramField direct = radon_classical(f_t, subset, xgrid);
    for (std::size_t k = 0; k < subset.size(); ++k)
      worst_c = std::max(worst_c, max_slice_diff(sheared.slices[test_angles[k]],
                                                 direct.slices[k]));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(3, "propagator equivalence",
         worst_q < 1e-4 && worst_c < 1e-4 && secs < 60.0);
  std::cout << "  quantum " << worst_q << ", classical " << worst_c << ", "
            << secs << " s\n";
}

TEST(Acceptance, C4_KineticResidual) {
  GaussianParams g{0.3, -0.1, 0.7, 0.6, 0.1};
  const Grid1D xgrid = make_uniform_grid(-7.0, 7.0, 141);
  const std::vector<double> mus{0.8, 0.9, 1.0, 1.1, 1.2};
  auto residual_at = [&](double h) {
    std::vector<TomogramField> traj;
    for (int it = 0; it <= 2; ++it) {
      GaussianTomogram gt{evolve_classical(g, it * h), it * h};
      TomogramField w;
      w.time = it * h;
      for (double mu : mus)
        for (int i = -2; i <= 2; ++i)
          w.slices.push_back(
              gaussian_tomogram_slice(gt, Ray{mu, 0.3 + i * h}, xgrid));
      traj.push_back(std::move(w));
    }
    return free_kinetic_residual(traj);
  };
  const double r1 = residual_at(0.01);
  const double r2 = residual_at(0.005);
  const double ratio = r1 / r2;
  report(4, "kinetic residual",
         r1 < 1e-3 && ratio > 3.5 && ratio < 4.5);
  std::cout << "  residual " << r1 << ", refinement ratio " << ratio << "\n";
}

TEST(Acceptance, C5_ConstantOfMotion) {
  const std::vector<double> times{0.0, 0.5, 1.0, 5.0};
  // analytic branch
  double worst_analytic = 0.0;
  for (const GaussianParams& g :
       {kVacuum, GaussianParams{0.2, 0.4, 0.9, 0.6, 0.1},
        GaussianParams{-1.0, 0.3, 0.4, 0.4, 0.0}}) {
    const double lhs0 = g.sqq * g.spp - g.sqp * g.sqp;
    for (double t : times) {
      const GaussianParams gt = evolve_classical(g, t);
      worst_analytic = std::max(
          worst_analytic,
          std::abs(gt.sqq * gt.spp - gt.sqp * gt.sqp - lhs0));
    }
  }

  // sampled branch: spectral quantum evolution + tomographic covariance
  const Grid1D big = make_uniform_grid(-30.0, 30.0, 1024);
  const WaveFunction psi0 = gaussian_wavefunction(kVacuum, big);
  const Grid1D xgrid = make_uniform_grid(-25.0, 25.0, 512);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const RaySet rays{Ray{1, 0}, Ray{0, 1}, Ray{inv_sqrt2, inv_sqrt2}};
  double worst_sampled = 0.0;
  for (double t : times) {
    const WaveFunction psi_t = evolve_wavefunction(psi0, t);
    const TomogramField w = tomogram_quantum(psi_t, rays, xgrid);
    const CovarianceRecord c = covariance_from_tomogram(w);
    const double lhs = c.sqq * c.spp - c.sqp * c.sqp;
    worst_sampled = std::max(worst_sampled, std::abs(lhs - 0.25));
  }
  report(5, "constant of motion",
         worst_analytic < 1e-10 && worst_sampled < 1e-4);
  std::cout << "  analytic drift " << worst_analytic << ", sampled drift "
            << worst_sampled << "\n";
}

TEST(Acceptance, C6_Homogeneity) {
  GaussianParams g{0.1, -0.2, 0.8, 0.6, 0.2};
  const PhaseSpaceField f = gaussian_phase_density(g, square_grid(8, 256));
  const Grid1D xgrid = make_uniform_grid(-6.0, 6.0, 241);
  RaySet base;
  for (double th : {0.4, 1.2, 2.3}) base.push_back(Ray::from_angle(th));
  const TomogramField w1 = radon_classical(f, base, xgrid);

  double worst = 0.0;
  for (double lambda : {-2.0, -1.0, 0.5, 2.0}) {
    RaySet scaled;
    for (const Ray& r : base)
      scaled.push_back(Ray{lambda * r.mu, lambda * r.nu});
    const double a = std::abs(lambda);
    const Grid1D xg2 = make_uniform_grid(-6.0 * a, 6.0 * a, 241);
    const TomogramField w2 = radon_classical(f, scaled, xg2);
    for (std::size_t k = 0; k < base.size(); ++k) {
      for (int i = 0; i < xgrid.n; ++i) {
        // lambda * x_i lands exactly on xg2 (same index, or mirrored when
        // lambda < 0)
        const int j = lambda > 0 ? i : xgrid.n - 1 - i;
        worst = std::max(worst, std::abs(w2.slices[k].values[j] -
                                         w1.slices[k].values[i] / a));
      }
    }
  }

  // differential form of the same constraint on a (mu, nu) lattice
  const double h = 0.01;
  RaySet lattice;
  for (double mu : {1.0 - h, 1.0, 1.0 + h})
    for (double nu : {-h, 0.0, h}) lattice.push_back(Ray{mu, nu});
  const double res =
      scaling_constraint_residual(radon_classical(f, lattice, xgrid));
  report(6, "homogeneity", worst < 1e-4 && res < 1e-3);
  std::cout << "  scaling mismatch " << worst << ", lattice residual " << res
            << "\n";
}

TEST(Acceptance, C7_ClassifierConcordance) {
  bool pass = true;
  double boundary_lhs = -1.0;
  for (int k = 0; k <= 20; ++k) {
    const double s2 = 0.2 + 0.03 * k;
    GaussianTomogram g{GaussianParams{0, 0, s2, s2, 0.0}, 0.0};
    const SrResult sr = sr_test(covariance_from_tomogram(g));
    PtResult pt = positive_type_test(g, wh_lattice(7, 2.0));
    if (pt.ok != sr.ok) pt = positive_type_test(g, wh_lattice(13, 3.0));
    if (std::abs(sr.lhs - 0.25) > 1e-3 && pt.ok != sr.ok) {
      pass = false;
      std::cout << "  disagreement at s2 = " << s2 << "\n";
    }
    if (std::abs(s2 - 0.5) < 1e-12) boundary_lhs = sr.lhs;
  }
  pass = pass && std::abs(boundary_lhs - 0.25) < 1e-9;
  report(7, "classifier concordance", pass);
  std::cout << "  boundary lhs " << boundary_lhs << "\n";
}

TEST(Acceptance, C8_MarginalIdentities) {
  // classical: axis-ray slices vs quadrature marginals
  GaussianParams g{0.3, 0.2, 0.7, 0.6, -0.1};
  const PhaseSpaceField f = gaussian_phase_density(g, square_grid(8, 257));
  const TomogramField wc =
      radon_classical(f, RaySet{Ray{1, 0}, Ray{0, 1}}, f.grid.gq);
  double worst_c = 0.0;
  for (int i = 0; i < f.grid.gq.n; ++i) {
    std::vector<double> col(f.grid.gp.n);
    for (int j = 0; j < f.grid.gp.n; ++j) col[j] = f.at(i, j);
    worst_c = std::max(worst_c, std::abs(wc.slices[0].values[i] -
                                         trapezoid_sum(col, f.grid.gp.step())));
  }
  for (int j = 0; j < f.grid.gp.n; ++j) {
    std::vector<double> row(f.grid.gq.n);
    for (int i = 0; i < f.grid.gq.n; ++i) row[i] = f.at(i, j);
    worst_c = std::max(worst_c, std::abs(wc.slices[1].values[j] -
                                         trapezoid_sum(row, f.grid.gq.step())));
  }

  // quantum: ground-state slices vs |psi|^2 and the momentum density
  const Grid1D qgrid = make_uniform_grid(-8.0, 8.0, 257);
  const WaveFunction psi = gaussian_wavefunction(kVacuum, qgrid);
  const TomogramField wq =
      tomogram_quantum(psi, RaySet{Ray{1, 0}, Ray{0, 1}}, qgrid);
  double worst_q = 0.0;
  for (int i = 0; i < qgrid.n; ++i) {
    worst_q = std::max(worst_q, std::abs(wq.slices[0].values[i] -
                                         std::norm(psi.amplitudes[i])));
    const double p = qgrid.point(i);
    worst_q = std::max(worst_q,
                       std::abs(wq.slices[1].values[i] -
                                std::exp(-p * p) / std::sqrt(std::numbers::pi)));
  }
  report(8, "marginal identities", worst_c < 1e-6 && worst_q < 1e-6);
  std::cout << "  classical " << worst_c << ", quantum " << worst_q << "\n";
}

TEST(Acceptance, C9_CliDeterminism) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tomokit_accept";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = TOMOKIT_CLI_PATH;

  write_text_file((dir / "vacuum.json").string(),
                  to_json(kVacuum).dump(2) + "\n");
  GaussianParams sub{0.0, 0.0, 0.4, 0.4, 0.0};
  write_text_file((dir / "sub.json").string(), to_json(sub).dump(2) + "\n");

  auto run = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };

  bool pass = true;
  const std::string tomo_args = "tomogram --state " +
                                (dir / "vacuum.json").string() +
                                " --angles 64 --xgrid -8:8:128 --out ";
  pass &= run(tomo_args + (dir / "w1.csv").string()) == 0;
  pass &= run(tomo_args + (dir / "w2.csv").string()) == 0;
  pass &= slurp(dir / "w1.csv") == slurp(dir / "w2.csv");
  pass &= !slurp(dir / "w1.csv").empty();

  const std::string cls_args =
      "classify --state " + (dir / "sub.json").string() + " --out ";
  pass &= run(cls_args + (dir / "r1.json").string()) == 0;
  pass &= run(cls_args + (dir / "r2.json").string()) == 0;
  pass &= slurp(dir / "r1.json") == slurp(dir / "r2.json");
  pass &= slurp(dir / "r1.json").find("classical-only") != std::string::npos;

  // exit-code contract: config error -> 1
  pass &= run("tomogram --state " + (dir / "missing.json").string() +
              " --out " + (dir / "x.csv").string()) == 1;
  report(9, "CLI determinism", pass);
}
