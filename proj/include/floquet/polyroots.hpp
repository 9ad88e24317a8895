#pragma once

// Roots of scalar complex polynomials (balanced companion matrix + Newton
// polish) and of Laurent characteristic polynomials f(beta, E) in beta.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "floquet/errors.hpp"
#include "floquet/laurent.hpp"

namespace floquet {

struct RootList {
  std::vector<cplx> roots;       // ascending |root|, ties broken by arg
  std::vector<double> residuals; // |p(z)| / sum_k |c_k| |z|^k
  int expected = 0;              // generic count (2M for Laurent roots)
  int missing_at_infinity = 0;   // dropped degenerate leading coefficients
  int missing_at_zero = 0;       // dropped degenerate trailing coefficients

  bool flagged() const { return missing_at_infinity + missing_at_zero > 0; }
  std::size_t size() const { return roots.size(); }
};

namespace detail {

inline cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline double backward_error(const std::vector<cplx>& c, cplx z) {
  double scale = 0.0;
  const double r = std::abs(z);
  for (auto it = c.rbegin(); it != c.rend(); ++it) scale = scale * r + std::abs(*it);
  const double v = std::abs(horner(c, z));
  return scale > 0.0 ? v / scale : v;
}

// Parlett-Reinsch diagonal similarity balancing (radix 2).
inline void balance(Matrix& a) {
  constexpr double radix = 2.0, sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  for (int sweep = 0; !done && sweep < 100; ++sweep) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

inline void sort_by_modulus(std::vector<cplx>& z, std::vector<double>* aux = nullptr) {
  std::vector<std::size_t> idx(z.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double ra = std::abs(z[a]), rb = std::abs(z[b]);
    const double tol = 1e-12 * std::max({ra, rb, 1e-300});
    if (std::abs(ra - rb) > tol) return ra < rb;
    return std::arg(z[a]) < std::arg(z[b]);
  });
  std::vector<cplx> zs;
  zs.reserve(z.size());
  for (auto i : idx) zs.push_back(z[i]);
  if (aux) {
    std::vector<double> as;
    as.reserve(z.size());
    for (auto i : idx) as.push_back((*aux)[i]);
    *aux = std::move(as);
  }
  z = std::move(zs);
}

}  // namespace detail

// All roots of sum_k coeffs[k] z^k (ascending coefficient order). Exact zero
// leading coefficients are trimmed; a zero polynomial is an error and a
// constant yields an empty list.
inline RootList poly_roots(std::vector<cplx> coeffs) {
  while (!coeffs.empty() && coeffs.back() == cplx{}) coeffs.pop_back();
  if (coeffs.empty()) throw DomainError("poly_roots: zero polynomial");
  RootList out;
  const int d = static_cast<int>(coeffs.size()) - 1;
  out.expected = d;
  if (d == 0) return out;

  std::vector<cplx> z;
  if (d == 1) {
    z.push_back(-coeffs[0] / coeffs[1]);
  } else {
    Matrix C = Matrix::Zero(d, d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) C(i, d - 1) = -coeffs[i] / coeffs[d];
    detail::balance(C);
    Eigen::ComplexEigenSolver<Matrix> es(C, false);
    if (es.info() != Eigen::Success) throw ConditioningError("poly_roots: companion eigensolver failed");
    z.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
  }

  std::vector<cplx> dc(d);
  for (int k = 1; k <= d; ++k) dc[k - 1] = static_cast<double>(k) * coeffs[k];
  out.residuals.resize(d);
  for (int i = 0; i < d; ++i) {
    cplx r = z[i];
    double err = detail::backward_error(coeffs, r);
    for (int it = 0; it < 20 && err > 1e-17; ++it) {
      const cplx dp = detail::horner(dc, r);
      if (dp == cplx{}) break;
      const cplx cand = r - detail::horner(coeffs, r) / dp;
      const double e2 = detail::backward_error(coeffs, cand);
      if (!(e2 < err)) break;
      r = cand;
      err = e2;
    }
    z[i] = r;
    out.residuals[i] = err;
  }
  detail::sort_by_modulus(z, &out.residuals);
  out.roots = std::move(z);
  return out;
}

// Relative size below which a leading/trailing coefficient of the cleared
// polynomial beta^M f(beta, E) is treated as vanishing.
inline constexpr double kDegenerateCoeffTol = 1e-12;

// The beta-roots of f(beta, E) = 0 after clearing beta^{mq}. Roots at zero
// and infinity produced by degenerate edge coefficients are dropped and
// counted in missing_at_zero / missing_at_infinity.
inline RootList laurent_roots(const CharPoly& f, cplx E) {
  const int M = f.m * f.q;
  const LaurentPoly p = f.at_energy(E);
  if (p.is_zero()) throw DomainError("laurent_roots: f(beta, E) vanishes identically");
  const LaurentPoly t = p.trimmed(kDegenerateCoeffTol);
  RootList out = poly_roots(t.coeffs());
  out.expected = 2 * M;
  out.missing_at_zero = t.lowest() + M;
  out.missing_at_infinity = M - t.highest();
  return out;
}

// One entry of the pooled root list: which shift (index into the shift list)
// the root came from.
struct ZoneRoot {
  cplx beta;
  int shift_index;
};

struct PooledRoots {
  std::vector<ZoneRoot> roots;  // ascending modulus
  int K = 0;                    // (number of shifts) * M; middle pair is K-1, K (0-based)
  bool complete = true;         // every shift produced the generic 2M roots
  double gap = 0.0;             // log(|beta_{K+1}| / |beta_K|)
};

// Pools laurent_roots(f, E + s) over all shifts s and locates the middle pair.
inline PooledRoots pooled_roots(const CharPoly& f, const std::vector<cplx>& shifts, cplx E) {
  if (shifts.empty()) throw ConfigError("pooled_roots: empty shift list");
  PooledRoots out;
  const int M = f.m * f.q;
  out.K = static_cast<int>(shifts.size()) * M;
  std::vector<cplx> all;
  std::vector<double> label;
  for (std::size_t s = 0; s < shifts.size(); ++s) {
    const RootList r = laurent_roots(f, E + shifts[s]);
    if (r.flagged()) out.complete = false;
    for (const auto& z : r.roots) {
      all.push_back(z);
      label.push_back(static_cast<double>(s));
    }
  }
  detail::sort_by_modulus(all, &label);
  out.roots.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) out.roots.push_back({all[i], static_cast<int>(label[i])});
  if (!out.complete || static_cast<int>(all.size()) != 2 * out.K || out.K == 0) {
    out.complete = false;
    out.gap = std::numeric_limits<double>::infinity();
    return out;
  }
  out.gap = std::log(std::abs(all[out.K]) / std::abs(all[out.K - 1]));
  return out;
}

// log(|beta~_{K+1}| / |beta~_K|) of the pooled, modulus-sorted roots; zero
// exactly on the (Floquet) GBZ. Infinite when a shift lost roots to
// degenerate coefficients.
inline double middle_pair_gap(const CharPoly& f, const std::vector<cplx>& shifts, cplx E) {
  return pooled_roots(f, shifts, E).gap;
}

// Energy shifts 2 pi l / T for l = -lc..lc, in ascending l.
inline std::vector<cplx> floquet_shifts(int lc, double T) {
  std::vector<cplx> s;
  for (int l = -lc; l <= lc; ++l) s.emplace_back(2.0 * kPi * l / T, 0.0);
  return s;
}

}  // namespace floquet
