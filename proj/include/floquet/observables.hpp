#pragma once

// Complex fraction eta, two-parameter phase diagrams of eta from the lattice
// oracle, Hausdorff distances, and Lyapunov traces of wavepacket growth.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "floquet/errors.hpp"
#include "floquet/gbz.hpp"
#include "floquet/lattice.hpp"
#include "floquet/models.hpp"
#include "floquet/parallel.hpp"
#include "floquet/spectrum.hpp"

namespace floquet {

inline double default_im_tol(const SpectrumSet& s) { return 1e-8 * s.spectral_radius(); }

inline double eta_fraction(const SpectrumSet& s, double imTol) {
  if (s.empty()) throw DomainError("eta_fraction: empty spectrum");
  if (!(imTol > 0.0)) throw ConfigError("eta_fraction: imTol must be positive");
  std::size_t n = 0;
  for (const auto& e : s.values)
    if (std::abs(e.imag()) > imTol) ++n;
  return static_cast<double>(n) / static_cast<double>(s.size());
}

// eta with the default tolerance 1e-8 * spectral radius.
inline double eta_fraction(const SpectrumSet& s) {
  if (s.empty()) throw DomainError("eta_fraction: empty spectrum");
  const double tol = default_im_tol(s);
  return eta_fraction(s, tol > 0.0 ? tol : std::numeric_limits<double>::min());
}

inline double hausdorff(const SpectrumSet& a, const SpectrumSet& b) { return hausdorff_points(a.values, b.values); }

inline double hausdorff(const GBZCurve& a, const GBZCurve& b) {
  if (a.empty() || b.empty()) throw DomainError("hausdorff: empty curve");
  return hausdorff_points(betas(a), betas(b));
}

// --- phase diagrams -------------------------------------------------------------

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct PhaseDiagram {
  SweepAxis axis1, axis2;
  std::vector<double> values;              // eta, row-major (axis1 outer); NaN for missing cells
  std::map<std::size_t, std::string> errors;  // cell index -> message
  ParamMap meta;                           // fixed parameters
  std::string model;
  double imTol = 0.0;                      // <= 0: default per cell

  double at(std::size_t i, std::size_t j) const { return values.at(i * axis2.values.size() + j); }
};

struct PhaseDiagramOptions {
  double imTol = 0.0;
  OracleOptions oracle;
  int workers = 1;
};

inline PhaseDiagram phase_diagram(const std::string& model, const SweepAxis& a1, const SweepAxis& a2,
                                  const ParamMap& fixed, const PhaseDiagramOptions& opt = {}) {
  if (a1.values.size() < 2 || a2.values.size() < 2) throw ConfigError("phase_diagram: grid sizes must be >= 2");
  if (a1.name == a2.name) throw ConfigError("phase_diagram: the two axes must differ");
  PhaseDiagram pd;
  pd.axis1 = a1;
  pd.axis2 = a2;
  pd.meta = fixed;
  pd.model = model;
  pd.imTol = opt.imTol;
  const std::size_t n2 = a2.values.size(), n = a1.values.size() * n2;
  pd.values.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> err(n);
  parallel_for(n, opt.workers, [&](std::size_t c) {
    ParamMap p = fixed;
    p[a1.name] = a1.values[c / n2];
    p[a2.name] = a2.values[c % n2];
    try {
      const SpectrumSet s = oracle_spectrum(build_model(model, p), opt.oracle);
      pd.values[c] = opt.imTol > 0.0 ? eta_fraction(s, opt.imTol) : eta_fraction(s);
    } catch (const std::exception& e) {
      err[c] = e.what();
    }
  });
  for (std::size_t c = 0; c < n; ++c)
    if (!err[c].empty()) pd.errors[c] = err[c];
  return pd;
}

// Smallest axis value (scanning ascending) at which eta > 0, per value of the
// other axis; NaN when eta stays 0. `length_axis` selects which axis is scanned.
inline std::vector<double> onset_along(const PhaseDiagram& pd, int length_axis = 1) {
  const std::size_t n1 = pd.axis1.values.size(), n2 = pd.axis2.values.size();
  std::vector<double> out;
  const std::size_t outer = length_axis == 1 ? n2 : n1, inner = length_axis == 1 ? n1 : n2;
  const auto& scan = length_axis == 1 ? pd.axis1.values : pd.axis2.values;
  for (std::size_t o = 0; o < outer; ++o) {
    std::vector<std::pair<double, double>> col;
    for (std::size_t k = 0; k < inner; ++k)
      col.push_back({scan[k], length_axis == 1 ? pd.at(k, o) : pd.at(o, k)});
    std::sort(col.begin(), col.end());
    double onset = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [x, eta] : col)
      if (eta > 0.0) {
        onset = x;
        break;
      }
    out.push_back(onset);
  }
  return out;
}

// --- Lyapunov dynamics ----------------------------------------------------------

struct LyapunovTrace {
  std::vector<double> times;    // n T
  std::vector<double> logNorm;  // ln <psi|psi>
  std::vector<double> lambdaEst;  // logNorm / (2 t)
  double lambda = 0.0;          // growth rate over the averaging window
  std::pair<int, int> window;   // periods [first, last] used for lambda
};

struct LyapunovOptions {
  Precision precision = Precision::extended;
};

// Evolves |psi(0)> = |initSite> by whole periods with per-period
// renormalization; lambda is the mean of ln-norm increments over the last
// half of the trace, divided by 2T.
inline LyapunovTrace lyapunov(const DriveProtocol& p, int initSite, int nPeriods, const LyapunovOptions& opt = {}) {
  if (nPeriods < 1) throw ConfigError("lyapunov: nPeriods must be >= 1");
  if (initSite < 0 || initSite >= p.dim()) throw ConfigError("lyapunov: initSite outside the chain");
  LyapunovTrace tr;
  tr.times.push_back(0.0);
  tr.logNorm.push_back(0.0);
  tr.lambdaEst.push_back(0.0);
  auto record = [&](int n, double acc) {
    const double t = n * p.T;
    tr.times.push_back(t);
    tr.logNorm.push_back(acc);
    tr.lambdaEst.push_back(acc / (2.0 * t));
  };
  double acc = 0.0;
  if (opt.precision == Precision::extended) {
    const DDMatrix U = floquet_unitary_extended(p);
    Eigen::Matrix<ddcplx, Eigen::Dynamic, 1> psi = Eigen::Matrix<ddcplx, Eigen::Dynamic, 1>::Zero(p.dim());
    psi(initSite) = ddcplx(ddreal(1.0));
    for (int n = 1; n <= nPeriods; ++n) {
      psi = (U * psi).eval();
      const ddreal nrm = psi.norm();
      if (!(nrm > ddreal(0.0)) || !isfinite(nrm)) throw ConditioningError("lyapunov: state norm lost");
      acc += 2.0 * std::log(static_cast<double>(nrm));
      psi /= ddcplx(nrm);
      record(n, acc);
    }
  } else {
    const Matrix U = floquet_unitary(p);
    Vector psi = Vector::Zero(p.dim());
    psi(initSite) = 1.0;
    for (int n = 1; n <= nPeriods; ++n) {
      psi = (U * psi).eval();
      const double nrm = psi.norm();
      if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ConditioningError("lyapunov: state norm lost");
      acc += 2.0 * std::log(nrm);
      psi /= nrm;
      record(n, acc);
    }
  }
  const int first = nPeriods / 2;
  tr.window = {first, nPeriods};
  tr.lambda = (tr.logNorm[nPeriods] - tr.logNorm[first]) / (2.0 * p.T * (nPeriods - first));
  return tr;
}

// The initial site |L/2> of the first orbital in the middle cell.
inline int middle_site(const DriveProtocol& p) { return (p.L / 2) * p.q; }

}  // namespace floquet
