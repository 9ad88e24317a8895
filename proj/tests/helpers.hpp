#pragma once

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "floquet/laurent.hpp"

namespace th {

using floquet::cplx;

inline cplx rand_cplx(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng)};
}

// Polynomial coefficients (ascending) of lead * prod (z - r).
inline std::vector<cplx> from_roots(const std::vector<cplx>& roots, cplx lead = 1.0) {
  std::vector<cplx> c{lead};
  for (const auto& r : roots) {
    std::vector<cplx> next(c.size() + 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

// Distance in the complex plane, or on the cylinder Re E mod 2 pi / T when T > 0.
inline double zone_distance(cplx a, cplx b, double T = 0.0) {
  double dr = a.real() - b.real();
  if (T > 0.0) {
    const double w = 2.0 * floquet::kPi / T;
    dr -= w * std::round(dr / w);
  }
  return std::hypot(dr, a.imag() - b.imag());
}

// Largest distance from the conjugate of a point of a to the nearest point of a.
inline double conjugation_defect(const std::vector<cplx>& a, double T = 0.0) {
  double worst = 0.0;
  for (const auto& z : a) {
    double best = 1e300;
    for (const auto& w : a) best = std::min(best, zone_distance(std::conj(z), w, T));
    worst = std::max(worst, best);
  }
  return worst;
}

// Symmetric Hausdorff distance with zone_distance as the metric.
inline double zone_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b, double T = 0.0) {
  auto directed = [T](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = 1e300;
      for (const auto& q : y) best = std::min(best, zone_distance(p, q, T));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace th
