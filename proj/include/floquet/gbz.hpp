#pragma once

// Static and Floquet GBZ from auxiliary-GBZ candidates, the thermodynamic
// quasienergy spectrum they carry, and the critical driving period at which
// aGBZ_1 first touches the static GBZ.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "floquet/errors.hpp"
#include "floquet/laurent.hpp"
#include "floquet/parallel.hpp"
#include "floquet/polyroots.hpp"
#include "floquet/resultant.hpp"
#include "floquet/spectrum.hpp"

namespace floquet {

struct GBZOptions {
  AGBZOptions agbz;
  double gap_tol = 1e-6;        // on log-modulus of the middle pair
  double hausdorff_tol = 1e-6;  // cutoff convergence
  int max_extra_cutoff = 8;
  double dedup = 1e-8;
};

struct FloquetGBZ {
  GBZCurve points;
  SpectrumSet spectrum;
  int cutoffUsed = 0;
  bool converged = false;
  double T = 0.0;  // 0 for the static GBZ
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, FloquetGBZ partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const FloquetGBZ& partial() const { return partial_; }

 private:
  FloquetGBZ partial_;
};

// True when beta (a root at energy E) is one of the middle pair of the roots
// of f(., E + s) pooled over the shifts, and that pair has equal modulus.
inline bool passes_middle_pair(const CharPoly& f, const std::vector<cplx>& shifts, const GBZPoint& p, double tol) {
  const PooledRoots pr = pooled_roots(f, shifts, p.E);
  if (!pr.complete || !(pr.gap < tol)) return false;
  const double lb = std::log(std::abs(p.beta));
  const double lo = std::log(std::abs(pr.roots[pr.K - 1].beta));
  return std::abs(lb - lo) < tol;
}

inline GBZCurve filter_middle_pair(const CharPoly& f, const GBZCurve& candidates, const std::vector<cplx>& shifts,
                                   double tol, int workers = 1) {
  std::vector<char> keep(candidates.size(), 0);
  parallel_for(candidates.size(), workers, [&](std::size_t i) {
    try {
      keep[i] = passes_middle_pair(f, shifts, candidates[i], tol) ? 1 : 0;
    } catch (const DomainError&) {
      keep[i] = 0;
    }
  });
  GBZCurve out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (keep[i]) out.push_back(candidates[i]);
  return out;
}

// Energies of the points, folded when T > 0, deduplicated on a grid of the
// given cell size and sorted.
inline SpectrumSet spectrum_of_points(const GBZCurve& pts, double T, double cell = 1e-8) {
  std::set<std::pair<long long, long long>> seen;
  SpectrumSet s;
  s.period = T;
  for (const auto& p : pts) {
    const cplx e = T > 0.0 ? fold_quasienergy(p.E, T) : p.E;
    const auto key = std::make_pair(std::llround(e.real() / cell), std::llround(e.imag() / cell));
    if (seen.insert(key).second) s.values.push_back(e);
  }
  std::sort(s.values.begin(), s.values.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return s;
}

inline SpectrumSet gbz_spectrum(const FloquetGBZ& g, double cell = 1e-8) {
  return spectrum_of_points(g.points, g.T, cell);
}

inline std::vector<cplx> betas(const GBZCurve& c) {
  std::vector<cplx> b;
  b.reserve(c.size());
  for (const auto& p : c) b.push_back(p.beta);
  return b;
}

// Hausdorff distance between the beta sets of two curves (0 when both are
// empty, infinite when exactly one is).
inline double curve_hausdorff(const GBZCurve& a, const GBZCurve& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return hausdorff_points(betas(a), betas(b));
}

inline FloquetGBZ static_gbz(const CharPoly& f, const GBZOptions& opt = {}) {
  FloquetGBZ g;
  const GBZCurve cand = agbz_points(f, 0, 1.0, opt.agbz);
  g.points = filter_middle_pair(f, cand, {cplx{}}, opt.gap_tol, opt.agbz.workers);
  g.spectrum = spectrum_of_points(g.points, 0.0, opt.dedup);
  g.converged = true;
  return g;
}

inline FloquetGBZ static_gbz(const LaurentMatrixPoly& h, const GBZOptions& opt = {}) {
  return static_gbz(char_poly(h), opt);
}

// Pooled Floquet GBZ: candidates from aGBZ_0..aGBZ_lc filtered against the
// roots pooled over shifts -lc..lc; lc grows until the result is stable.
inline FloquetGBZ floquet_gbz(const CharPoly& f, double T, int lcInit = 1, const GBZOptions& opt = {}) {
  if (!(T > 0.0)) throw ConfigError("floquet_gbz: T must be positive");
  if (lcInit < 1) throw ConfigError("floquet_gbz: lcInit must be >= 1");
  std::vector<GBZCurve> curves;
  auto build = [&](int lc) {
    while (static_cast<int>(curves.size()) <= lc)
      curves.push_back(agbz_points(f, static_cast<int>(curves.size()), T, opt.agbz));
    GBZCurve cand;
    for (int l = 0; l <= lc; ++l) cand.insert(cand.end(), curves[l].begin(), curves[l].end());
    return filter_middle_pair(f, cand, floquet_shifts(lc, T), opt.gap_tol, opt.agbz.workers);
  };
  FloquetGBZ g;
  g.T = T;
  GBZCurve prev = build(lcInit);
  for (int lc = lcInit; lc < lcInit + opt.max_extra_cutoff; ++lc) {
    GBZCurve next = build(lc + 1);
    if (curve_hausdorff(prev, next) < opt.hausdorff_tol) {
      g.points = std::move(prev);
      g.cutoffUsed = lc;
      g.converged = true;
      g.spectrum = gbz_spectrum(g, opt.dedup);
      return g;
    }
    prev = std::move(next);
  }
  g.points = std::move(prev);
  g.cutoffUsed = lcInit + opt.max_extra_cutoff;
  g.spectrum = gbz_spectrum(g, opt.dedup);
  throw NonConvergenceError("floquet_gbz: no stable GBZ up to cutoff " + std::to_string(g.cutoffUsed), g);
}

inline FloquetGBZ floquet_gbz(const LaurentMatrixPoly& hF, double T, int lcInit = 1, const GBZOptions& opt = {}) {
  return floquet_gbz(char_poly(hF), T, lcInit, opt);
}

// --- critical period ----------------------------------------------------------

struct CriticalPeriodOptions {
  GBZOptions gbz;
  int scan_points = 25;         // coarse scan locating the first touch
  double touch_tol = 1e-3;      // d(T) <= touch_tol counts as touching
  double period_tol = 1e-4;     // bisection stops at T_hi - T_lo below this
  int refine = 16;              // local theta subdivision near the closest pair
  double complex_tol = 1e-8;    // relative; GBZ spectrum past the touch must be complex
};

struct TouchInfo {
  double d = std::numeric_limits<double>::infinity();
  cplx beta_agbz;
  cplx beta_static;
  double curvature_agbz = 0.0;
  double curvature_static = 0.0;
};

struct CriticalPeriodResult {
  double Tc = 0.0;
  std::vector<std::pair<double, double>> gapFunction;  // (T, d(T)), ascending T
  std::pair<double, double> bracket;
  TouchInfo touch;
};

namespace detail {

// Unsigned curvature of the circle through three points (0 if collinear).
inline double three_point_curvature(cplx a, cplx b, cplx c) {
  const double ab = std::abs(b - a), bc = std::abs(c - b), ca = std::abs(a - c);
  const double cross = std::abs(((b - a) * std::conj(c - a)).imag());
  if (ab * bc * ca == 0.0) return 0.0;
  return 2.0 * cross / (ab * bc * ca);
}

// Curvature at `at` from the nearest curve point and the two mutually
// farthest points within `radius` of it.
inline double curvature_near(const GBZCurve& c, cplx at, double radius) {
  std::vector<cplx> near;
  for (const auto& p : c)
    if (std::abs(p.beta - at) <= radius) near.push_back(p.beta);
  if (near.size() < 3) return 0.0;
  cplx p0 = near.front();
  for (const auto& z : near)
    if (std::abs(z - at) < std::abs(p0 - at)) p0 = z;
  double best = -1.0;
  cplx p1 = p0, p2 = p0;
  for (std::size_t i = 0; i < near.size(); ++i)
    for (std::size_t j = i + 1; j < near.size(); ++j)
      if (std::abs(near[i] - near[j]) > best) {
        best = std::abs(near[i] - near[j]);
        p1 = near[i];
        p2 = near[j];
      }
  return three_point_curvature(p1, p0, p2);
}

inline std::vector<double> local_thetas(double center, double step, int refine) {
  std::vector<double> th;
  for (int k = -2 * refine; k <= 2 * refine; ++k) th.push_back(center + step * k / refine);
  return th;
}

}  // namespace detail

// d(T): distance between the aGBZ_1 point set at period T and the static GBZ
// point set, resampled on a finer theta grid around the closest pair.
inline TouchInfo touch_distance(const CharPoly& f, const FloquetGBZ& stat, double T,
                                const CriticalPeriodOptions& opt) {
  TouchInfo info;
  const GBZCurve a1 = agbz_points(f, 1, T, opt.gbz.agbz);
  if (a1.empty() || stat.points.empty()) return info;
  std::size_t ia = 0, is = 0;
  for (std::size_t i = 0; i < a1.size(); ++i)
    for (std::size_t j = 0; j < stat.points.size(); ++j) {
      const double d = std::abs(a1[i].beta - stat.points[j].beta);
      if (d < info.d) {
        info.d = d;
        ia = i;
        is = j;
      }
    }
  const double step = 2.0 * kPi / opt.gbz.agbz.theta_grid;
  AGBZOptions local = opt.gbz.agbz;
  local.adaptive = false;
  GBZCurve ra = agbz_points_at(f, 1, T, detail::local_thetas(a1[ia].theta, step, opt.refine), local);
  GBZCurve rs = filter_middle_pair(
      f, agbz_points_at(f, 0, 1.0, detail::local_thetas(stat.points[is].theta, step, opt.refine), local), {cplx{}},
      opt.gbz.gap_tol, local.workers);
  ra.push_back(a1[ia]);
  rs.push_back(stat.points[is]);
  for (const auto& p : ra)
    for (const auto& q : rs) {
      const double d = std::abs(p.beta - q.beta);
      if (d <= info.d) {
        info.d = d;
        info.beta_agbz = p.beta;
        info.beta_static = q.beta;
      }
    }
  const double radius = 2.0 * step * std::max(std::abs(info.beta_agbz), 1e-12);
  info.curvature_agbz = detail::curvature_near(ra, info.beta_agbz, radius);
  info.curvature_static = detail::curvature_near(rs, info.beta_static, radius);
  return info;
}

// First period in [Tlo, Thi] at which aGBZ_1 touches the static GBZ, found
// by a coarse scan followed by bisection. Throws BracketError when d(Tlo)
// already vanishes, when no touch occurs, or when the Floquet GBZ spectrum
// just past the touch is still real (touch without PT breaking).
inline CriticalPeriodResult critical_period(const CharPoly& f, std::pair<double, double> bracket,
                                            const CriticalPeriodOptions& opt = {}) {
  auto [Tlo, Thi] = bracket;
  if (!(Tlo > 0.0) || !(Thi > Tlo)) throw ConfigError("critical_period: need 0 < T_lo < T_hi");
  if (opt.scan_points < 2) throw ConfigError("critical_period: scan_points must be >= 2");
  const FloquetGBZ stat = static_gbz(f, opt.gbz);
  if (stat.points.empty()) throw BracketError("critical_period: static GBZ is empty");

  CriticalPeriodResult res;
  auto d = [&](double T) {
    const TouchInfo t = touch_distance(f, stat, T, opt);
    res.gapFunction.push_back({T, t.d});
    return t;
  };

  double prevT = Tlo;
  if (!(d(Tlo).d > opt.touch_tol))
    throw BracketError("critical_period: aGBZ_1 already touches the static GBZ at T_lo = " + std::to_string(Tlo));
  double hitT = -1.0;
  for (int i = 1; i < opt.scan_points; ++i) {
    const double T = Tlo + (Thi - Tlo) * i / (opt.scan_points - 1);
    if (d(T).d <= opt.touch_tol) {
      hitT = T;
      break;
    }
    prevT = T;
  }
  if (hitT < 0.0) throw BracketError("critical_period: no touching event in the bracket");

  double lo = prevT, hi = hitT;
  TouchInfo at_hi;
  while (hi - lo >= opt.period_tol) {
    const double mid = 0.5 * (lo + hi);
    const TouchInfo t = d(mid);
    if (t.d <= opt.touch_tol) {
      hi = mid;
      at_hi = t;
    } else {
      lo = mid;
    }
  }
  if (at_hi.d == std::numeric_limits<double>::infinity()) at_hi = touch_distance(f, stat, hi, opt);

  const FloquetGBZ past = floquet_gbz(f, hitT, 1, opt.gbz);
  const double radius = std::max(past.spectrum.spectral_radius(), 1e-300);
  double maxim = 0.0;
  for (const auto& e : past.spectrum.values) maxim = std::max(maxim, std::abs(e.imag()));
  if (!(maxim > opt.complex_tol * radius))
    throw BracketError("critical_period: aGBZ_1 touches the static GBZ near T = " + std::to_string(hi) +
                       " but the Floquet GBZ spectrum stays real");

  std::sort(res.gapFunction.begin(), res.gapFunction.end());
  res.Tc = 0.5 * (lo + hi);
  res.bracket = {lo, hi};
  res.touch = at_hi;
  return res;
}

inline CriticalPeriodResult critical_period(const LaurentMatrixPoly& hF, std::pair<double, double> bracket,
                                            const CriticalPeriodOptions& opt = {}) {
  return critical_period(char_poly(hF), bracket, opt);
}

}  // namespace floquet
