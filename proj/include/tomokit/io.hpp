#pragma once

// CSV / JSON serialization. All floats are written with 17 significant
// digits, '.' decimal separator and '\n' line endings, so identical inputs
// produce byte-identical artifacts.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tomokit/errors.hpp"
#include "tomokit/grid.hpp"
#include "tomokit/quantumness.hpp"
#include "tomokit/states.hpp"
#include "tomokit/tomography.hpp"

namespace tomokit {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "tomokit 0.1.0";

inline std::string fmt_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// ---- JSON state schemas ----

inline json to_json(const GaussianParams& g) {
  return json{{"kind", "gaussian"}, {"qbar", g.qbar}, {"pbar", g.pbar},
              {"sqq", g.sqq},       {"spp", g.spp},   {"sqp", g.sqp}};
}

inline GaussianParams gaussian_from_json(const json& j) {
  GaussianParams g;
  g.qbar = j.at("qbar").get<double>();
  g.pbar = j.at("pbar").get<double>();
  g.sqq = j.at("sqq").get<double>();
  g.spp = j.at("spp").get<double>();
  g.sqp = j.at("sqp").get<double>();
  g.validate();
  return g;
}

inline json to_json(const PointState& s) {
  return json{{"kind", "point"}, {"qbar", s.qbar}, {"pbar", s.pbar}};
}

inline PointState point_from_json(const json& j) {
  return PointState{j.at("qbar").get<double>(), j.at("pbar").get<double>()};
}

inline json to_json(const GaussianTomogram& g) {
  json j = to_json(g.params);
  j["time"] = g.time;
  return j;
}

inline GaussianTomogram gaussian_tomogram_from_json(const json& j) {
  return GaussianTomogram{gaussian_from_json(j),
                          j.value("time", 0.0)};
}

inline json to_json(const CovarianceRecord& c) {
  return json{{"mean_q", c.mean_q}, {"mean_p", c.mean_p}, {"sqq", c.sqq},
              {"spp", c.spp},       {"sqp", c.sqp},       {"source", c.source}};
}

inline json to_json(const ClassificationReport& r) {
  return json{{"nonneg_ok", r.nonneg_ok},
              {"norm_ok", r.norm_ok},
              {"homogeneity_residual", r.homogeneity_residual},
              {"sr_lhs", r.sr_lhs},
              {"sr_ok", r.sr_ok},
              {"pt_min_eigenvalue", r.pt_min_eigenvalue},
              {"pt_ok", r.pt_ok},
              {"verdict", to_string(r.verdict)}};
}

// ---- CSV ----

inline void write_csv(std::ostream& os, const RealField1D& f) {
  os << "x,value\n";
  for (int i = 0; i < f.grid.n; ++i)
    os << fmt_double(f.grid.point(i)) << ',' << fmt_double(f.values[i])
       << '\n';
}

inline void write_csv(std::ostream& os, const ComplexField1D& f) {
  os << "x,re,im\n";
  for (int i = 0; i < f.grid.n; ++i)
    os << fmt_double(f.grid.point(i)) << ','
       << fmt_double(f.values[i].real()) << ','
       << fmt_double(f.values[i].imag()) << '\n';
}

inline void write_csv(std::ostream& os, const PhaseSpaceField& f) {
  os << "q,p,f\n";
  for (int i = 0; i < f.grid.gq.n; ++i)
    for (int j = 0; j < f.grid.gp.n; ++j)
      os << fmt_double(f.grid.gq.point(i)) << ','
         << fmt_double(f.grid.gp.point(j)) << ',' << fmt_double(f.at(i, j))
         << '\n';
}

inline void write_csv(std::ostream& os, const WaveFunction& psi) {
  os << "q,re,im\n";
  for (int i = 0; i < psi.grid.n; ++i)
    os << fmt_double(psi.grid.point(i)) << ','
       << fmt_double(psi.amplitudes[i].real()) << ','
       << fmt_double(psi.amplitudes[i].imag()) << '\n';
}

inline void write_csv(std::ostream& os, const DensityMatrix& rho) {
  os << "q,qp,re,im\n";
  for (int i = 0; i < rho.grid.n; ++i)
    for (int j = 0; j < rho.grid.n; ++j)
      os << fmt_double(rho.grid.point(i)) << ','
         << fmt_double(rho.grid.point(j)) << ','
         << fmt_double(rho.at(i, j).real()) << ','
         << fmt_double(rho.at(i, j).imag()) << '\n';
}

inline void write_csv(std::ostream& os, const TomogramField& w) {
  os << "mu,nu,x,w\n";
  for (const auto& s : w.slices)
    for (int i = 0; i < s.xgrid.n; ++i)
      os << fmt_double(s.ray.mu) << ',' << fmt_double(s.ray.nu) << ','
         << fmt_double(s.xgrid.point(i)) << ',' << fmt_double(s.values[i])
         << '\n';
}

/// JSON sidecar describing a TomogramField artifact.
inline json tomogram_sidecar(const TomogramField& w,
                             const RadonOptions& opts = {}) {
  json rays = json::array();
  for (const auto& s : w.slices) rays.push_back({s.ray.mu, s.ray.nu});
  const Grid1D& xg = w.slices.empty() ? Grid1D{} : w.slices.front().xgrid;
  return json{{"rays", rays},
              {"xgrid", {{"min", xg.min}, {"max", xg.max}, {"n", xg.n}}},
              {"time", w.time},
              {"tolerances",
               {{"clip_tol", opts.clip_tol}, {"leak_tol", opts.leak_tol}}},
              {"version", kVersion}};
}

inline TomogramField tomogram_from_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "mu,nu,x,w")
    throw IoError("tomogram CSV: expected header 'mu,nu,x,w'");
  TomogramField w;
  TomogramSlice cur;
  std::vector<double> xs;
  auto flush = [&]() {
    if (xs.empty()) return;
    if (xs.size() < 2) throw IoError("tomogram CSV: slice with < 2 samples");
    cur.xgrid = Grid1D{xs.front(), xs.back(), static_cast<int>(xs.size())};
    w.slices.push_back(cur);
    cur = TomogramSlice{};
    xs.clear();
  };
  bool have = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double mu, nu, x, v;
    char c;
    if (!(ls >> mu >> c >> nu >> c >> x >> c >> v))
      throw IoError("tomogram CSV: malformed row '" + line + "'");
    if (!have || mu != cur.ray.mu || nu != cur.ray.nu) {
      flush();
      cur.ray = Ray{mu, nu};
      have = true;
    }
    xs.push_back(x);
    cur.values.push_back(v);
  }
  flush();
  if (w.slices.empty()) throw IoError("tomogram CSV: no data rows");
  return w;
}

// ---- files ----

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << content;
  if (!os) throw IoError("write failed: " + path);
}

inline json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw IoError("bad JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace tomokit
