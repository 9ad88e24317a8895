#pragma once

// Elimination of E between f(beta, E) = 0 and f(e^{i theta} beta, E + 2 pi l / T) = 0
// through Sylvester resultants, and the auxiliary GBZ curves aGBZ_l built from
// the common roots.

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "floquet/errors.hpp"
#include "floquet/laurent.hpp"
#include "floquet/parallel.hpp"
#include "floquet/polyroots.hpp"

namespace floquet {

// Sylvester matrix of p (degree n) and r (degree k), both given with ascending
// coefficients. Rows 0..k-1 carry p, rows k..k+n-1 carry r, highest power first.
inline Matrix sylvester_matrix(const std::vector<cplx>& p, const std::vector<cplx>& r) {
  const int n = static_cast<int>(p.size()) - 1;
  const int k = static_cast<int>(r.size()) - 1;
  if (n < 1 || k < 1) throw DomainError("sylvester_matrix: both polynomials need degree >= 1");
  const int dim = n + k;
  Matrix S = Matrix::Zero(dim, dim);
  for (int row = 0; row < k; ++row)
    for (int j = 0; j <= n; ++j) S(row, row + j) = p[n - j];
  for (int row = 0; row < n; ++row)
    for (int j = 0; j <= k; ++j) S(k + row, row + j) = r[k - j];
  return S;
}

inline cplx sylvester_resultant_at(const std::vector<cplx>& p, const std::vector<cplx>& r) {
  return sylvester_matrix(p, r).partialPivLu().determinant();
}

// E-coefficients (ascending) of f(w beta, E + s) at fixed beta.
inline std::vector<cplx> shifted_e_coeffs(const CharPoly& f, cplx beta, cplx w, cplx s) {
  const std::vector<cplx> a = f.e_coeffs(w * beta);
  const int q = f.q;
  std::vector<cplx> b(q + 1);
  for (int j = 0; j <= q; ++j) {
    cplx acc{};
    cplx sp = 1.0;
    double binom = 1.0;  // C(k, j) for k = j, j+1, ...
    for (int k = j; k <= q; ++k) {
      acc += binom * sp * a[k];
      sp *= s;
      binom = binom * (k + 1) / (k + 1 - j);
    }
    b[j] = acc;
  }
  return b;
}

struct ResultantCurveSpec {
  CharPoly f;
  int ell = 0;
  double T = 1.0;
  double theta = 0.0;

  cplx rotation() const { return std::polar(1.0, theta); }
  cplx shift() const { return {2.0 * kPi * ell / T, 0.0}; }

  void validate() const {
    if (ell < 0) throw ConfigError("ResultantCurveSpec: ell must be >= 0");
    if (ell > 0 && !(T > 0.0)) throw ConfigError("ResultantCurveSpec: T must be positive");
    if (ell == 0 && std::abs(std::remainder(theta, 2.0 * kPi)) < 1e-15)
      throw ConfigError("ResultantCurveSpec: ell = 0 with theta = 0 gives an identically zero resultant");
  }
};

// g(beta, theta) evaluated directly through a Sylvester determinant.
inline cplx resultant_direct(const ResultantCurveSpec& spec, cplx beta) {
  return sylvester_resultant_at(spec.f.e_coeffs(beta), shifted_e_coeffs(spec.f, beta, spec.rotation(), spec.shift()));
}

struct InterpolatedResultant {
  LaurentPoly g;
  double radius = 1.0;
  double residual = 0.0;  // relative mismatch at held-out probes
};

// Exponent bound of g: each E-coefficient spans at most [-mq, mq] and the
// Sylvester determinant multiplies 2q of them.
inline int resultant_exponent_bound(const CharPoly& f) { return 2 * f.m * f.q * f.q; }

// Recovers the Laurent polynomial g(beta, theta) = Res_E[f(beta, E), f(e^{i theta} beta, E + 2 pi l / T)]
// by sampling Sylvester determinants on |beta| = radius and inverting the DFT.
// Throws ConditioningError when held-out probes disagree by more than tol.
inline InterpolatedResultant resultant_in_E(const ResultantCurveSpec& spec, double radius = 1.0, double tol = 1e-8) {
  spec.validate();
  const int B = resultant_exponent_bound(spec.f);
  const int width = 2 * B + 1;
  const int N = 2 * width;
  std::vector<cplx> samples(N);
  for (int j = 0; j < N; ++j) samples[j] = resultant_direct(spec, std::polar(radius, 2.0 * kPi * j / N));

  // g_n r^n = (1/N) sum_j g(beta_j) e^{-2 pi i j n / N}
  std::vector<cplx> c(width);
  for (int n = -B; n <= B; ++n) {
    cplx acc{};
    for (int j = 0; j < N; ++j) acc += samples[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>(j) * n / N);
    c[n + B] = acc / static_cast<double>(N) / std::pow(radius, n);
  }
  // Drop interpolation noise relative to the largest scaled coefficient.
  double cmax = 0.0;
  for (int n = -B; n <= B; ++n) cmax = std::max(cmax, std::abs(c[n + B]) * std::pow(radius, n));
  for (int n = -B; n <= B; ++n)
    if (std::abs(c[n + B]) * std::pow(radius, n) <= 1e-13 * cmax) c[n + B] = 0.0;

  InterpolatedResultant out{LaurentPoly(-B, std::move(c)), radius, 0.0};
  constexpr int kProbes = 7;
  for (int j = 0; j < kProbes; ++j) {
    const double rr = radius * (j % 2 == 0 ? 1.07 : 0.93);
    const cplx beta = std::polar(rr, 2.0 * kPi * (j + 0.37) / kProbes);
    const cplx direct = resultant_direct(spec, beta);
    const double scale = std::max({out.g.abs_sum(rr), std::abs(direct), 1e-300});
    out.residual = std::max(out.residual, std::abs(out.g(beta) - direct) / scale);
  }
  if (!(out.residual < tol))
    throw ConditioningError("resultant_in_E: interpolation residual " + std::to_string(out.residual) +
                            " at radius " + std::to_string(radius));
  return out;
}

// A point of an auxiliary/Floquet GBZ: beta with the Floquet-zone index it
// came from, the sweep phase and the (unfolded) energy at which it is a root.
struct GBZPoint {
  cplx beta;
  int ell = 0;
  double theta = 0.0;
  cplx E;
};

using GBZCurve = std::vector<GBZPoint>;

struct AGBZOptions {
  int theta_grid = 720;
  bool adaptive = true;             // one level of bisection on large gaps
  double common_root_tol = 1e-8;    // normalized |f| at the refined common root
  double radius = 1.0;
  std::vector<double> retry_radii{0.7, 1.4};
  int workers = 1;
};

namespace detail {

struct CommonRoot {
  cplx beta;
  cplx E;
  double residual;
};

// Newton refinement of (beta, E) on {f(beta, E) = 0, f(w beta, E + s) = 0},
// starting from the E-root of f(beta0, .) that best satisfies the second equation.
inline CommonRoot refine_common_root(const CharPoly& f, cplx beta0, cplx w, cplx s) {
  auto resid = [&](cplx b, cplx e) {
    const double r1 = std::abs(f(b, e)) / std::max(f.scale(b, e), 1e-300);
    const double r2 = std::abs(f(w * b, e + s)) / std::max(f.scale(w * b, e + s), 1e-300);
    return std::max(r1, r2);
  };
  const RootList er = poly_roots(f.e_coeffs(beta0));
  CommonRoot best{beta0, {}, std::numeric_limits<double>::infinity()};
  for (const auto& e : er.roots) {
    const double r = resid(beta0, e);
    if (r < best.residual) best = {beta0, e, r};
  }
  for (int it = 0; it < 8 && best.residual > 1e-15; ++it) {
    const cplx b = best.beta, e = best.E;
    const cplx F1 = f(b, e), F2 = f(w * b, e + s);
    const cplx J11 = f.d_beta(b, e), J12 = f.d_E(b, e);
    const cplx J21 = w * f.d_beta(w * b, e + s), J22 = f.d_E(w * b, e + s);
    const cplx det = J11 * J22 - J12 * J21;
    if (det == cplx{}) break;
    const cplx db = (J22 * F1 - J12 * F2) / det;
    const cplx de = (J11 * F2 - J21 * F1) / det;
    const CommonRoot cand{b - db, e - de, resid(b - db, e - de)};
    if (!(cand.residual < best.residual)) break;
    best = cand;
  }
  return best;
}

inline void sweep_theta(const CharPoly& f, int ell, double T, double theta, const AGBZOptions& opt,
                        std::vector<GBZPoint>& out) {
  const ResultantCurveSpec spec{f, ell, T, theta};
  InterpolatedResultant res;
  bool ok = false;
  std::vector<double> radii{opt.radius};
  radii.insert(radii.end(), opt.retry_radii.begin(), opt.retry_radii.end());
  for (double r : radii) {
    try {
      res = resultant_in_E(spec, r);
      ok = true;
      break;
    } catch (const ConditioningError&) {
    }
  }
  if (!ok) throw ConditioningError("agbz_points: resultant interpolation failed at theta = " + std::to_string(theta));

  const LaurentPoly g = res.g.trimmed(1e-12);
  if (g.is_zero() || g.highest() == g.lowest()) return;
  const RootList roots = poly_roots(g.coeffs());
  const cplx w = spec.rotation(), s = spec.shift();
  for (const auto& bc : roots.roots) {
    if (std::abs(bc) < 1e-12 || std::abs(bc) > 1e12) continue;
    const CommonRoot cr = refine_common_root(f, bc, w, s);
    if (!(cr.residual < opt.common_root_tol)) continue;
    const double a = std::abs(cr.beta);
    if (a < 1e-12 || a > 1e12) continue;
    out.push_back({cr.beta, ell, theta, cr.E});
    out.push_back({w * cr.beta, ell, theta, cr.E + s});
  }
}

// Largest nearest-neighbour distance from points of a to the set b.
inline double set_jump(const std::vector<GBZPoint>& a, const std::vector<GBZPoint>& b) {
  if (a.empty() || b.empty()) return 0.0;
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : b) best = std::min(best, std::abs(p.beta - r.beta));
    worst = std::max(worst, best);
  }
  return worst;
}

inline void sort_curve(std::vector<GBZPoint>& c) {
  std::sort(c.begin(), c.end(), [](const GBZPoint& a, const GBZPoint& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    if (a.beta.real() != b.beta.real()) return a.beta.real() < b.beta.real();
    return a.beta.imag() < b.beta.imag();
  });
}

}  // namespace detail

// aGBZ_l: for each theta on the grid (theta = 0 skipped when l = 0) solve
// g(beta, theta) = 0 and keep the validated pairs {beta_c, e^{i theta} beta_c}.
inline GBZCurve agbz_points(const CharPoly& f, int ell, double T, const AGBZOptions& opt = {}) {
  if (opt.theta_grid < 8) throw ConfigError("agbz_points: theta grid must have at least 8 points");
  if (ell < 0) throw ConfigError("agbz_points: ell must be >= 0");
  const int N = opt.theta_grid;
  std::vector<double> thetas;
  for (int j = (ell == 0 ? 1 : 0); j < N; ++j) thetas.push_back(2.0 * kPi * j / N);

  std::vector<std::vector<GBZPoint>> per(thetas.size());
  parallel_for(thetas.size(), opt.workers, [&](std::size_t i) { detail::sweep_theta(f, ell, T, thetas[i], opt, per[i]); });

  if (opt.adaptive && thetas.size() > 2) {
    std::vector<double> jumps;
    for (std::size_t i = 0; i + 1 < per.size(); ++i)
      jumps.push_back(std::max(detail::set_jump(per[i], per[i + 1]), detail::set_jump(per[i + 1], per[i])));
    std::vector<double> sorted = jumps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    std::vector<double> mids;
    for (std::size_t i = 0; i < jumps.size(); ++i)
      if (median > 0.0 && jumps[i] > 5.0 * median) {
        // Mirror each midpoint as well: theta -> 2 pi - theta is complex
        // conjugation for real-coefficient models, and the base grid already
        // has that symmetry.
        const double m = 0.5 * (thetas[i] + thetas[i + 1]);
        mids.push_back(m);
        mids.push_back(2.0 * kPi - m);
      }
    std::sort(mids.begin(), mids.end());
    mids.erase(std::unique(mids.begin(), mids.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               mids.end());
    std::vector<std::vector<GBZPoint>> extra(mids.size());
    parallel_for(mids.size(), opt.workers, [&](std::size_t i) { detail::sweep_theta(f, ell, T, mids[i], opt, extra[i]); });
    for (auto& e : extra) per.push_back(std::move(e));
  }

  GBZCurve out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  detail::sort_curve(out);
  return out;
}

// aGBZ_l restricted to the given phases (no adaptive refinement).
inline GBZCurve agbz_points_at(const CharPoly& f, int ell, double T, const std::vector<double>& thetas,
                               const AGBZOptions& opt = {}) {
  std::vector<std::vector<GBZPoint>> per(thetas.size());
  parallel_for(thetas.size(), opt.workers, [&](std::size_t i) {
    if (ell == 0 && std::abs(std::remainder(thetas[i], 2.0 * kPi)) < 1e-15) return;
    detail::sweep_theta(f, ell, T, thetas[i], opt, per[i]);
  });
  GBZCurve out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  detail::sort_curve(out);
  return out;
}

}  // namespace floquet
