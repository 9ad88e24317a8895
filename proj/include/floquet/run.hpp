#pragma once

// Task dispatch for RunConfig: runs one pipeline, writes its artifacts and a
// manifest into cfg.out, and maps failures to exit codes
// (0 ok, 1 numeric failure, 2 usage error).

#include <chrono>
#include <filesystem>
#include <string>

#include "floquet/config.hpp"
#include "floquet/gbz.hpp"
#include "floquet/io.hpp"
#include "floquet/lattice.hpp"
#include "floquet/models.hpp"
#include "floquet/observables.hpp"
#include "floquet/parallel.hpp"

#ifndef FLOQUET_VERSION
#define FLOQUET_VERSION "0.1.0"
#endif

namespace floquet {

inline constexpr const char* kToolName = "floquet-cli";
inline constexpr const char* kToolVersion = FLOQUET_VERSION;

namespace detail {

inline int resolved_workers(const RunConfig& c) { return c.workers > 0 ? c.workers : default_workers(); }

inline GBZOptions gbz_options(const RunConfig& c) {
  GBZOptions o;
  o.agbz.theta_grid = static_cast<int>(opt_int(c, "theta_grid"));
  o.agbz.adaptive = opt_bool(c, "adaptive");
  o.agbz.workers = resolved_workers(c);
  o.gap_tol = opt_double(c, "gap_tol");
  return o;
}

inline OracleOptions oracle_options(const RunConfig& c) {
  OracleOptions o;
  o.precision = opt_word(c, "precision") == "standard" ? Precision::standard : Precision::extended;
  o.radius = opt_double(c, "radius");
  return o;
}

inline Boundary boundary(const RunConfig& c) {
  return opt_word(c, "boundary") == "periodic" ? Boundary::periodic : Boundary::open;
}

inline json params_json(const ParamMap& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

inline double im_tol_or_default(const RunConfig& c, const SpectrumSet& s) {
  const double t = opt_double(c, "im_tol");
  if (t > 0.0) return t;
  const double d = default_im_tol(s);
  return d > 0.0 ? d : std::numeric_limits<double>::min();
}

inline double param_or(const RunConfig& c, const std::string& k, double def) {
  const auto it = c.params.find(k);
  return it == c.params.end() ? def : it->second;
}

namespace fs = std::filesystem;

inline void write_gbz_outputs(const fs::path& dir, const FloquetGBZ& g, const std::string& model, double imTol) {
  write_curve_csv(dir / "gbz_points.csv", g.points);
  write_spectrum_csv(dir / "spectrum.csv", g.spectrum, 0, g.T, model);
  io::write_json(dir / "summary.json", gbz_summary(g, imTol));
}

inline json task_gbz(const RunConfig& c, const fs::path& dir) {
  const CharPoly f = char_poly(model_floquet_bloch(c.model, c.params));
  const GBZOptions o = gbz_options(c);
  FloquetGBZ g;
  const bool stat = opt_bool(c, "static");
  try {
    g = stat ? static_gbz(f, o) : floquet_gbz(f, c.params.at("T"), static_cast<int>(opt_int(c, "lc_init")), o);
  } catch (const NonConvergenceError& e) {
    write_gbz_outputs(dir, e.partial(), c.model, im_tol_or_default(c, e.partial().spectrum));
    throw;
  }
  const double tol = im_tol_or_default(c, g.spectrum);
  write_gbz_outputs(dir, g, c.model, tol);
  json s = gbz_summary(g, tol);
  s["static"] = stat;
  return s;
}

inline json task_agbz(const RunConfig& c, const fs::path& dir) {
  const CharPoly f = char_poly(model_floquet_bloch(c.model, c.params));
  const int ell = static_cast<int>(opt_int(c, "ell"));
  const double T = c.params.at("T");
  const GBZCurve a = agbz_points(f, ell, T, gbz_options(c).agbz);
  write_curve_csv(dir / "agbz.csv", a);
  json s{{"T", T}, {"ell", ell}, {"n_points", a.size()}};
  io::write_json(dir / "summary.json", s);
  return s;
}

inline json task_spectrum(const RunConfig& c, const fs::path& dir) {
  const int k = static_cast<int>(opt_int(c, "k_grid"));
  const double T = param_or(c, "T", 0.0);
  SpectrumSet s = pbc_spectrum(model_floquet_bloch(c.model, c.params), k);
  if (T > 0.0) {
    s.period = T;
    for (auto& e : s.values) e = fold_quasienergy(e, T);
  }
  write_spectrum_csv(dir / "spectrum.csv", s, 0, T, c.model);
  json meta{{"model", c.model}, {"params", params_json(c.params)}, {"boundary", "bloch"}, {"k_grid", k},
            {"n_values", s.size()}, {"max_imag", s.empty() ? 0.0 : s.max_imag()}};
  io::write_json(dir / "spectrum.json", meta);
  return meta;
}

inline json task_oracle(const RunConfig& c, const fs::path& dir) {
  const DriveProtocol p = build_model(c.model, c.params, boundary(c));
  OracleOptions o = oracle_options(c);
  if (o.precision == Precision::extended && !(o.radius > 0.0)) o.radius = skin_radius_probe(p);
  const SpectrumSet s = oracle_spectrum(p, o);
  const double tol = im_tol_or_default(c, s);
  write_spectrum_csv(dir / "spectrum.csv", s, p.L, p.T, c.model);
  json meta{{"model", c.model},
            {"params", params_json(c.params)},
            {"boundary", opt_word(c, "boundary")},
            {"precision", opt_word(c, "precision")},
            {"radius", o.precision == Precision::extended ? o.radius : 1.0},
            {"imTol", tol},
            {"eta", eta_fraction(s, tol)},
            {"max_imag", s.max_imag()},
            {"n_values", s.size()}};
  io::write_json(dir / "spectrum.json", meta);
  return meta;
}

inline json task_phase_diagram(const RunConfig& c, const fs::path& dir) {
  PhaseDiagramOptions o;
  o.imTol = opt_double(c, "im_tol");
  o.oracle = oracle_options(c);
  o.workers = resolved_workers(c);
  ParamMap fixed = c.params;
  fixed.erase(c.axis1->name);
  fixed.erase(c.axis2->name);
  const PhaseDiagram pd = phase_diagram(c.model, *c.axis1, *c.axis2, fixed, o);
  write_phase_diagram_csv(dir / "phase_diagram.csv", pd);
  json meta = phase_diagram_json(pd);
  meta["precision"] = opt_word(c, "precision");
  if (c.axis1->name == "L" || c.axis2->name == "L") {
    const int la = c.axis1->name == "L" ? 1 : 2;
    const auto& other = la == 1 ? c.axis2 : c.axis1;
    json on = json::array();
    const auto v = onset_along(pd, la);
    for (std::size_t i = 0; i < v.size(); ++i) on.push_back({{other->name, other->values[i]}, {"L_onset", v[i]}});
    meta["onset"] = on;
  }
  io::write_json(dir / "phase_diagram.json", meta);
  if (!pd.errors.empty())
    throw ConditioningError("phase-diagram: " + std::to_string(pd.errors.size()) + " cells failed (see phase_diagram.json)");
  return json{{"cells", pd.values.size()}, {"failed", pd.errors.size()}};
}

inline json task_dynamics(const RunConfig& c, const fs::path& dir) {
  const DriveProtocol p = build_model(c.model, c.params, boundary(c));
  long long site = opt_int(c, "init_site");
  if (site < 0) site = middle_site(p);
  LyapunovOptions o;
  o.precision = oracle_options(c).precision;
  const LyapunovTrace tr = lyapunov(p, static_cast<int>(site), static_cast<int>(opt_int(c, "n_periods")), o);
  write_lyapunov_csv(dir / "lyapunov.csv", tr);
  json s{{"model", c.model},          {"params", params_json(c.params)},
         {"init_site", site},         {"n_periods", tr.logNorm.size() - 1},
         {"lambda", tr.lambda},       {"window", {tr.window.first, tr.window.second}},
         {"precision", opt_word(c, "precision")}};
  io::write_json(dir / "summary.json", s);
  return s;
}

inline json task_critical_period(const RunConfig& c, const fs::path& dir) {
  const CharPoly f = char_poly(model_floquet_bloch(c.model, c.params));
  CriticalPeriodOptions o;
  o.gbz = gbz_options(c);
  o.scan_points = static_cast<int>(opt_int(c, "scan_points"));
  o.touch_tol = opt_double(c, "touch_tol");
  const CriticalPeriodResult r = critical_period(f, {opt_double(c, "T_lo"), opt_double(c, "T_hi")}, o);
  write_gap_function_csv(dir / "gap_function.csv", r);
  json gf = json::array();
  for (const auto& [T, d] : r.gapFunction) gf.push_back({T, d});
  json s{{"model", c.model},
         {"params", params_json(c.params)},
         {"Tc", r.Tc},
         {"bracket", {r.bracket.first, r.bracket.second}},
         {"touch",
          {{"d", r.touch.d},
           {"beta_agbz", io::cplx_json(r.touch.beta_agbz)},
           {"beta_static", io::cplx_json(r.touch.beta_static)},
           {"curvature_agbz", r.touch.curvature_agbz},
           {"curvature_static", r.touch.curvature_static}}},
         {"gapFunction", gf}};
  io::write_json(dir / "summary.json", s);
  return s;
}

inline json config_json(const RunConfig& c) {
  json opts = json::object();
  for (const auto& [k, v] : c.options) opts[k] = v;
  json resolved = json::object();
  for (const auto& [k, spec] : option_table()) resolved[k] = raw_option(c, k);
  json j{{"task", c.task}, {"model", c.model}, {"params", params_json(c.params)}, {"options", opts},
         {"resolved_options", resolved}};
  for (const auto& [key, ax] : {std::pair{"axis1", &c.axis1}, std::pair{"axis2", &c.axis2}})
    if (*ax) j[key] = {{"name", (*ax)->name}, {"values", (*ax)->values}};
  j["out"] = c.out;
  j["workers"] = c.workers;
  return j;
}

}  // namespace detail

struct RunResult {
  int exit_code = 0;
  std::string message;
  json summary;
};

// Runs the configured task. Never throws for config or numeric failures:
// they are reported through the exit code and error.json.
inline RunResult run(const RunConfig& c) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = c.out;
  RunResult res;
  auto fail = [&](int code, const std::string& kind, const std::string& msg) {
    res.exit_code = code;
    res.message = msg;
    try {
      io::write_json(dir / "error.json", json{{"status", "error"}, {"kind", kind}, {"message", msg},
                                                  {"exit_code", code}, {"task", c.task}});
    } catch (...) {
    }
  };
  try {
    const auto problems = validate(c);
    if (!problems.empty()) {
      std::string msg = "invalid config:";
      for (const auto& p : problems) msg += "\n  " + p;
      throw ConfigError(msg);
    }
    fs::create_directories(dir);
    if (c.task == "gbz") res.summary = detail::task_gbz(c, dir);
    else if (c.task == "agbz") res.summary = detail::task_agbz(c, dir);
    else if (c.task == "spectrum") res.summary = detail::task_spectrum(c, dir);
    else if (c.task == "oracle") res.summary = detail::task_oracle(c, dir);
    else if (c.task == "phase-diagram") res.summary = detail::task_phase_diagram(c, dir);
    else if (c.task == "dynamics") res.summary = detail::task_dynamics(c, dir);
    else res.summary = detail::task_critical_period(c, dir);
    std::error_code ec;
    fs::remove(dir / "error.json", ec);
  } catch (const ConfigError& e) {
    fail(2, "usage", e.what());
  } catch (const NonConvergenceError& e) {
    fail(1, "non_convergence", e.what());
  } catch (const BracketError& e) {
    fail(1, "bracket", e.what());
  } catch (const ConditioningError& e) {
    fail(1, "conditioning", e.what());
  } catch (const DomainError& e) {
    fail(1, "domain", e.what());
  } catch (const std::exception& e) {
    fail(1, "numeric", e.what());
  }
  if (res.exit_code == 2 && !fs::exists(dir)) return res;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    io::write_json(dir / "manifest.json",
                       json{{"tool", kToolName},
                            {"version", kToolVersion},
                            {"config", detail::config_json(c)},
                            {"config_yaml", config_to_yaml(c)},
                            {"status", res.exit_code == 0 ? "ok" : "error"},
                            {"wall_time_s", wall}});
  } catch (...) {
  }
  return res;
}

}  // namespace floquet
