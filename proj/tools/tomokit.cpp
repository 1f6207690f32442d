// Command-line front end: builds states from JSON config files, runs
// transforms / evolutions / classifications and writes CSV artifacts with
// JSON sidecars. Exit codes: 0 success, 1 parse/config error, 2 numerical
// contract violation, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tomokit/tomokit.hpp"

namespace {

using tomokit::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

tomokit::Grid1D parse_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &tail) != 3)
    throw ConfigError("bad grid spec '" + spec + "', expected min:max:n");
  try {
    return tomokit::make_uniform_grid(lo, hi, n);
  } catch (const tomokit::InvalidGridError& e) {
    throw ConfigError(std::string(e.what()) + " in grid spec '" + spec + "'");
  }
}

struct LoadedState {
  std::string kind;
  tomokit::GaussianParams gaussian;
  tomokit::PointState point;
  double time = 0.0;
};

LoadedState load_state(const std::string& path) {
  json j;
  try {
    j = tomokit::read_json_file(path);
  } catch (const tomokit::IoError& e) {
    throw ConfigError(e.what());
  }
  LoadedState s;
  s.kind = j.value("kind", "gaussian");
  s.time = j.value("time", 0.0);
  try {
    if (s.kind == "gaussian")
      s.gaussian = tomokit::gaussian_from_json(j);
    else if (s.kind == "point")
      s.point = tomokit::point_from_json(j);
    else
      throw ConfigError("unknown state kind '" + s.kind + "' in " + path);
  } catch (const json::exception& e) {
    throw ConfigError("bad state file " + path + ": " + e.what());
  } catch (const tomokit::CovarianceError& e) {
    throw ConfigError("bad state file " + path + ": " + e.what());
  }
  return s;
}

void emit(const std::string& path, const std::string& content) {
  tomokit::write_text_file(path, content);
  std::cout << "wrote " << path << "\n";
}

void emit_sidecar(const std::string& artifact, const json& config,
                  const json& extra = json::object()) {
  json meta{{"config", config},
            {"extra", extra},
            {"version", tomokit::kVersion}};
  emit(artifact + ".meta.json", meta.dump(2) + "\n");
}

json radon_tolerances(const tomokit::RadonOptions& o) {
  return json{{"k_max", o.k_max},         {"dk", o.dk},
              {"pad_factor", o.pad_factor}, {"clip_tol", o.clip_tol},
              {"leak_tol", o.leak_tol},    {"physical_tol", o.physical_tol}};
}

std::string csv_of(const tomokit::TomogramField& w) {
  std::ostringstream os;
  tomokit::write_csv(os, w);
  return os.str();
}

// ---- subcommand configs ----

struct TomogramCmd {
  std::string state_path;
  std::string out = "w.csv";
  std::string xgrid = "-8:8:257";
  std::string qgrid = "-8:8:257";
  int angles = 64;
  bool quantum = false;
};

struct EvolveCmd {
  std::string state_path;
  std::string out = "out.csv";
  std::string picture = "tomogram";
  std::string xgrid = "-8:8:257";
  std::string qgrid = "-8:8:257";
  std::string pgrid = "-8:8:257";
  int angles = 64;
  double t = 0.0;
};

struct ReconstructPhaseCmd {
  std::string in_path;
  std::string out = "f.csv";
  std::string qgrid = "-8:8:129";
  std::string pgrid = "-8:8:129";
};

struct ReconstructDensityCmd {
  std::string in_path;
  std::string out = "rho.csv";
  std::string qgrid = "-8:8:129";
};

struct MomentsCmd {
  std::string in_path;
  std::string out;
  double mu = 1.0;
  double nu = 0.0;
};

struct ClassifyCmd {
  std::string state_path;
  std::string in_path;
  std::string out;
};

struct ResidualsCmd {
  std::string state_path;
  std::string out;
  double step = 0.01;
};

int run_tomogram(const TomogramCmd& c) {
  const LoadedState st = load_state(c.state_path);
  if (st.kind != "gaussian")
    throw ConfigError(
        "tomogram: state kind '" + st.kind +
        "' has a singular (delta) tomogram; only 'gaussian' is sampled");
  const tomokit::Grid1D xg = parse_grid(c.xgrid);
  const tomokit::RaySet rays = tomokit::unit_circle_rays(c.angles);
  tomokit::RadonOptions opts;
  tomokit::TomogramField w;
  if (c.quantum) {
    const tomokit::Grid1D qg = parse_grid(c.qgrid);
    const tomokit::WaveFunction psi =
        tomokit::gaussian_wavefunction(st.gaussian, qg);
    w = tomokit::tomogram_quantum(psi, rays, xg, opts);
  } else {
    w = tomokit::radon_classical(st.gaussian, rays, xg);
  }
  emit(c.out, csv_of(w));
  json cfg{{"command", "tomogram"}, {"state", c.state_path},
           {"angles", c.angles},    {"xgrid", c.xgrid},
           {"quantum", c.quantum},  {"tolerances", radon_tolerances(opts)}};
  emit_sidecar(c.out, cfg, tomokit::tomogram_sidecar(w, opts));
  return 0;
}

int run_evolve(const EvolveCmd& c) {
  const LoadedState st = load_state(c.state_path);
  json cfg{{"command", "evolve"},   {"state", c.state_path},
           {"t", c.t},              {"picture", c.picture},
           {"angles", c.angles},    {"xgrid", c.xgrid},
           {"qgrid", c.qgrid},      {"pgrid", c.pgrid}};
  if (st.kind == "point") {
    if (c.picture != "phase")
      throw ConfigError("evolve: point states support only --picture phase");
    const tomokit::PointState moved = tomokit::evolve_classical(st.point, c.t);
    json out = tomokit::to_json(moved);
    out["time"] = c.t;
    emit(c.out, out.dump(2) + "\n");
    emit_sidecar(c.out, cfg);
    return 0;
  }
  const tomokit::GaussianParams& g = st.gaussian;
  if (c.picture == "tomogram") {
    const tomokit::GaussianTomogram moved =
        tomokit::evolve_tomogram(tomokit::GaussianTomogram{g, st.time}, c.t);
    const tomokit::TomogramField w = [&] {
      tomokit::TomogramField f = tomokit::radon_classical(
          moved.params, tomokit::unit_circle_rays(c.angles),
          parse_grid(c.xgrid));
      f.time = moved.time;
      return f;
    }();
    emit(c.out, csv_of(w));
    emit_sidecar(c.out, cfg, tomokit::tomogram_sidecar(w));
  } else if (c.picture == "phase") {
    const tomokit::GaussianParams moved = tomokit::evolve_classical(g, c.t);
    const tomokit::PhaseSpaceField f = tomokit::gaussian_phase_density(
        moved, tomokit::Grid2D{parse_grid(c.qgrid), parse_grid(c.pgrid)});
    std::ostringstream os;
    tomokit::write_csv(os, f);
    emit(c.out, os.str());
    emit_sidecar(c.out, cfg);
  } else if (c.picture == "wavefunction") {
    const tomokit::WaveFunction psi0 =
        tomokit::gaussian_wavefunction(g, parse_grid(c.qgrid));
    const tomokit::WaveFunction psi = tomokit::evolve_wavefunction(psi0, c.t);
    std::ostringstream os;
    tomokit::write_csv(os, psi);
    emit(c.out, os.str());
    emit_sidecar(c.out, cfg);
  } else if (c.picture == "density") {
    const tomokit::DensityMatrix rho0 = tomokit::density_from_wavefunction(
        tomokit::gaussian_wavefunction(g, parse_grid(c.qgrid)));
    const tomokit::DensityMatrix rho = tomokit::evolve_density(rho0, c.t);
    std::ostringstream os;
    tomokit::write_csv(os, rho);
    emit(c.out, os.str());
    emit_sidecar(c.out, cfg);
  } else {
    throw ConfigError("evolve: unknown picture '" + c.picture + "'");
  }
  return 0;
}

tomokit::TomogramField load_tomogram(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open tomogram CSV: " + path);
  try {
    return tomokit::tomogram_from_csv(is);
  } catch (const tomokit::IoError& e) {
    throw ConfigError(e.what());
  }
}

int run_reconstruct_phase(const ReconstructPhaseCmd& c) {
  const tomokit::TomogramField w = load_tomogram(c.in_path);
  tomokit::RadonOptions opts;
  const tomokit::PhaseSpaceField f = tomokit::inverse_radon(
      w, tomokit::Grid2D{parse_grid(c.qgrid), parse_grid(c.pgrid)}, opts);
  std::ostringstream os;
  tomokit::write_csv(os, f);
  emit(c.out, os.str());
  json cfg{{"command", "reconstruct-phase"}, {"in", c.in_path},
           {"qgrid", c.qgrid},               {"pgrid", c.pgrid},
           {"tolerances", radon_tolerances(opts)}};
  emit_sidecar(c.out, cfg);
  return 0;
}

int run_reconstruct_density(const ReconstructDensityCmd& c) {
  const tomokit::TomogramField w = load_tomogram(c.in_path);
  tomokit::RadonOptions opts;
  const tomokit::ReconstructionResult res =
      tomokit::reconstruct_density(w, parse_grid(c.qgrid), opts);
  std::ostringstream os;
  tomokit::write_csv(os, res.rho);
  emit(c.out, os.str());
  json cfg{{"command", "reconstruct-density"},
           {"in", c.in_path},
           {"qgrid", c.qgrid},
           {"tolerances", radon_tolerances(opts)}};
  json extra{{"min_eigenvalue", res.min_eigenvalue},
             {"physical", res.physical}};
  emit_sidecar(c.out, cfg, extra);
  if (!res.physical) {
    std::cerr << "reconstruct-density: density operator nonnegativity "
                 "violated (min eigenvalue "
              << tomokit::fmt_double(res.min_eigenvalue) << " < -"
              << tomokit::fmt_double(opts.physical_tol) << ")\n";
    return 2;
  }
  return 0;
}

int run_moments(const MomentsCmd& c) {
  const tomokit::TomogramField w = load_tomogram(c.in_path);
  const tomokit::TomogramSlice& s = tomokit::detail::find_ray(w, c.mu, c.nu);
  json out{{"mu", c.mu}, {"nu", c.nu}};
  const double m1 = tomokit::tomographic_moment(s, 1);
  const double m2 = tomokit::tomographic_moment(s, 2);
  out["m0"] = tomokit::tomographic_moment(s, 0);
  out["m1"] = m1;
  out["m2"] = m2;
  out["variance"] = m2 - m1 * m1;
  std::cout << "ray (" << tomokit::fmt_double(c.mu) << ", "
            << tomokit::fmt_double(c.nu) << "): mean "
            << tomokit::fmt_double(m1) << ", variance "
            << tomokit::fmt_double(m2 - m1 * m1) << "\n";
  if (!c.out.empty()) {
    emit(c.out, out.dump(2) + "\n");
    emit_sidecar(c.out,
                 json{{"command", "moments"}, {"in", c.in_path},
                      {"mu", c.mu}, {"nu", c.nu}});
  }
  return 0;
}

int run_classify(const ClassifyCmd& c) {
  if (c.state_path.empty() == c.in_path.empty())
    throw ConfigError("classify: give exactly one of --state or --in");
  tomokit::ClassificationReport rep;
  json source;
  if (!c.state_path.empty()) {
    const LoadedState st = load_state(c.state_path);
    if (st.kind != "gaussian")
      throw ConfigError("classify: only gaussian states or sampled tomograms");
    rep = tomokit::classify(tomokit::GaussianTomogram{st.gaussian, st.time});
    source = c.state_path;
  } else {
    rep = tomokit::classify(load_tomogram(c.in_path));
    source = c.in_path;
  }
  const json j = tomokit::to_json(rep);
  for (const auto& [key, value] : j.items())
    std::cout << key << ": " << value.dump() << "\n";
  if (!c.out.empty()) {
    emit(c.out, j.dump(2) + "\n");
    emit_sidecar(c.out, json{{"command", "classify"}, {"source", source}});
  }
  return 0;
}

int run_residuals(const ResidualsCmd& c) {
  const LoadedState st = load_state(c.state_path);
  if (st.kind != "gaussian")
    throw ConfigError("residuals: needs a gaussian state");
  const tomokit::GaussianTomogram g{st.gaussian, 0.0};
  const tomokit::Grid1D xg = tomokit::make_uniform_grid(-6.0, 6.0, 121);

  tomokit::RaySet probe;
  for (double mu : {0.9, 1.0, 1.1})
    for (double nu : {-0.1, 0.0, 0.1}) probe.push_back(tomokit::Ray{mu, nu});
  const double scaling = tomokit::scaling_constraint_residual(g, probe, xg);

  const double h = c.step;
  auto lattice_at = [&](double t) {
    tomokit::GaussianTomogram gt = tomokit::evolve_tomogram(g, t);
    tomokit::TomogramField w;
    w.time = t;
    for (double mu : {0.9, 1.0, 1.1})
      for (int i = -1; i <= 1; ++i)
        w.slices.push_back(tomokit::gaussian_tomogram_slice(
            gt, tomokit::Ray{mu, i * h}, xg));
    return w;
  };
  const std::vector<tomokit::TomogramField> traj{lattice_at(0), lattice_at(h),
                                                 lattice_at(2 * h)};
  const double kinetic = tomokit::free_kinetic_residual(traj);

  std::cout << "scaling-constraint residual: " << tomokit::fmt_double(scaling)
            << "\n";
  std::cout << "free-kinetic residual (step " << tomokit::fmt_double(h)
            << "): " << tomokit::fmt_double(kinetic) << "\n";
  if (!c.out.empty()) {
    json out{{"scaling_residual", scaling},
             {"kinetic_residual", kinetic},
             {"step", h}};
    emit(c.out, out.dump(2) + "\n");
    emit_sidecar(c.out, json{{"command", "residuals"},
                             {"state", c.state_path},
                             {"step", h}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tomographic-representation toolkit"};
  app.require_subcommand(1);

  TomogramCmd tomo;
  auto* c_tomo = app.add_subcommand("tomogram",
                                    "sample a state's tomogram on a ray set");
  c_tomo->add_option("--state", tomo.state_path, "state JSON file")
      ->required();
  c_tomo->add_option("--angles", tomo.angles, "unit-circle angle count");
  c_tomo->add_option("--xgrid", tomo.xgrid, "X grid min:max:n");
  c_tomo->add_option("--qgrid", tomo.qgrid, "position grid (quantum route)");
  c_tomo->add_flag("--quantum", tomo.quantum,
                   "build the quantum tomogram of the matching pure state");
  c_tomo->add_option("--out", tomo.out, "output CSV path");

  EvolveCmd evo;
  auto* c_evo = app.add_subcommand("evolve", "free-motion evolution");
  c_evo->add_option("--state", evo.state_path, "state JSON file")->required();
  c_evo->add_option("--t", evo.t, "evolution time")->required();
  c_evo->add_option("--picture", evo.picture,
                    "tomogram | phase | wavefunction | density");
  c_evo->add_option("--angles", evo.angles, "unit-circle angle count");
  c_evo->add_option("--xgrid", evo.xgrid, "X grid min:max:n");
  c_evo->add_option("--qgrid", evo.qgrid, "position grid min:max:n");
  c_evo->add_option("--pgrid", evo.pgrid, "momentum grid min:max:n");
  c_evo->add_option("--out", evo.out, "output path");

  ReconstructPhaseCmd rphase;
  auto* c_rphase = app.add_subcommand(
      "reconstruct-phase", "phase-space density from a tomogram CSV");
  c_rphase->add_option("--in", rphase.in_path, "tomogram CSV")->required();
  c_rphase->add_option("--qgrid", rphase.qgrid, "q grid min:max:n");
  c_rphase->add_option("--pgrid", rphase.pgrid, "p grid min:max:n");
  c_rphase->add_option("--out", rphase.out, "output CSV path");

  ReconstructDensityCmd rdens;
  auto* c_rdens = app.add_subcommand(
      "reconstruct-density", "density matrix from a tomogram CSV");
  c_rdens->add_option("--in", rdens.in_path, "tomogram CSV")->required();
  c_rdens->add_option("--qgrid", rdens.qgrid, "q grid min:max:n");
  c_rdens->add_option("--out", rdens.out, "output CSV path");

  MomentsCmd mom;
  auto* c_mom = app.add_subcommand("moments", "slice statistics at a ray");
  c_mom->add_option("--in", mom.in_path, "tomogram CSV")->required();
  c_mom->add_option("--mu", mom.mu, "ray mu");
  c_mom->add_option("--nu", mom.nu, "ray nu");
  c_mom->add_option("--out", mom.out, "optional JSON output path");

  ClassifyCmd cls;
  auto* c_cls = app.add_subcommand("classify",
                                   "classical/quantum tomogram classification");
  c_cls->add_option("--state", cls.state_path, "gaussian state JSON file");
  c_cls->add_option("--in", cls.in_path, "sampled tomogram CSV");
  c_cls->add_option("--out", cls.out, "optional JSON output path");

  ResidualsCmd res;
  auto* c_res = app.add_subcommand("residuals",
                                   "kinetic and scaling residual checks");
  c_res->add_option("--state", res.state_path, "gaussian state JSON file")
      ->required();
  c_res->add_option("--step", res.step, "finite-difference step");
  c_res->add_option("--out", res.out, "optional JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (*c_tomo) return run_tomogram(tomo);
    if (*c_evo) return run_evolve(evo);
    if (*c_rphase) return run_reconstruct_phase(rphase);
    if (*c_rdens) return run_reconstruct_density(rdens);
    if (*c_mom) return run_moments(mom);
    if (*c_cls) return run_classify(cls);
    if (*c_res) return run_residuals(res);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tomokit::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const tomokit::Error& e) {
    std::cerr << "numerical contract violated: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
