#pragma once

// CSV and JSON writers for curves, spectra, phase diagrams and traces.
// Numbers are printed with %.17g so that files round-trip exactly.

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "floquet/errors.hpp"
#include "floquet/gbz.hpp"
#include "floquet/observables.hpp"
#include "floquet/spectrum.hpp"

namespace floquet {

using json = nlohmann::ordered_json;

namespace io {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  return f;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace io

inline void write_curve_csv(const std::filesystem::path& path, const GBZCurve& c) {
  auto f = io::open_out(path);
  f << "re_beta,im_beta,ell,theta,re_E,im_E\n";
  for (const auto& p : c)
    f << io::num(p.beta.real()) << ',' << io::num(p.beta.imag()) << ',' << p.ell << ',' << io::num(p.theta) << ','
      << io::num(p.E.real()) << ',' << io::num(p.E.imag()) << '\n';
}

// L = 0 marks a thermodynamic-limit (GBZ or PBC) spectrum.
inline void write_spectrum_csv(const std::filesystem::path& path, const SpectrumSet& s, int L, double T,
                               const std::string& model) {
  auto f = io::open_out(path);
  f << "re_E,im_E,L,T,model\n";
  for (const auto& e : s.values)
    f << io::num(e.real()) << ',' << io::num(e.imag()) << ',' << L << ',' << io::num(T) << ',' << model << '\n';
}

inline json gbz_summary(const FloquetGBZ& g, double imTol) {
  std::size_t nc = 0;
  for (const auto& e : g.spectrum.values)
    if (std::abs(e.imag()) > imTol) ++nc;
  return json{{"T", g.T},
              {"cutoffUsed", g.cutoffUsed},
              {"converged", g.converged},
              {"n_points", g.points.size()},
              {"n_complex_E", nc}};
}

inline void write_phase_diagram_csv(const std::filesystem::path& path, const PhaseDiagram& pd) {
  auto f = io::open_out(path);
  f << "axis1,axis2,eta\n";  // axis names live in the JSON
  const std::size_t n2 = pd.axis2.values.size();
  for (std::size_t i = 0; i < pd.axis1.values.size(); ++i)
    for (std::size_t j = 0; j < n2; ++j)
      f << io::num(pd.axis1.values[i]) << ',' << io::num(pd.axis2.values[j]) << ',' << io::num(pd.at(i, j)) << '\n';
}

inline json phase_diagram_json(const PhaseDiagram& pd) {
  json errs = json::array();
  const std::size_t n2 = pd.axis2.values.size();
  for (const auto& [c, msg] : pd.errors)
    errs.push_back({{pd.axis1.name, pd.axis1.values[c / n2]}, {pd.axis2.name, pd.axis2.values[c % n2]}, {"error", msg}});
  json fixed = json::object();
  for (const auto& [k, v] : pd.meta) fixed[k] = v;
  return json{{"model", pd.model},
              {"axis1", {{"name", pd.axis1.name}, {"values", pd.axis1.values}}},
              {"axis2", {{"name", pd.axis2.name}, {"values", pd.axis2.values}}},
              {"fixed", fixed},
              {"imTol", pd.imTol > 0.0 ? json(pd.imTol) : json("1e-8*spectral_radius")},
              {"errors", errs}};
}

inline void write_lyapunov_csv(const std::filesystem::path& path, const LyapunovTrace& tr) {
  auto f = io::open_out(path);
  f << "n_period,log_norm,lambda_est\n";
  for (std::size_t n = 0; n < tr.logNorm.size(); ++n)
    f << n << ',' << io::num(tr.logNorm[n]) << ',' << io::num(tr.lambdaEst[n]) << '\n';
}

inline void write_gap_function_csv(const std::filesystem::path& path, const CriticalPeriodResult& r) {
  auto f = io::open_out(path);
  f << "T,d\n";
  for (const auto& [T, d] : r.gapFunction) f << io::num(T) << ',' << io::num(d) << '\n';
}

}  // namespace floquet
