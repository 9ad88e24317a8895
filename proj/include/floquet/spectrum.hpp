#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "floquet/errors.hpp"
#include "floquet/laurent.hpp"

namespace floquet {

// Folds Re E into the quasienergy zone (-pi/T, pi/T].
inline cplx fold_quasienergy(cplx E, double T) {
  const double w = 2.0 * kPi / T;
  const double re = E.real() + w * std::floor((kPi / T - E.real()) / w);
  return {re, E.imag()};
}

// Multiset of (quasi)energies. period > 0 declares the branch convention
// Re E in (-pi/T, pi/T]; period == 0 means a static, unfolded spectrum.
struct SpectrumSet {
  std::vector<cplx> values;
  double period = 0.0;

  bool empty() const { return values.empty(); }
  std::size_t size() const { return values.size(); }

  double max_imag() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& e : values) m = std::max(m, e.imag());
    return m;
  }
  double spectral_radius() const {
    double m = 0.0;
    for (const auto& e : values) m = std::max(m, std::abs(e));
    return m;
  }
};

// Symmetric Hausdorff distance between finite point sets in the complex
// plane. Both sets must be nonempty.
inline double hausdorff_points(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty() || b.empty()) throw DomainError("hausdorff: empty point set");
  auto directed = [](const std::vector<cplx>& from, std::vector<cplx> to) {
    std::sort(to.begin(), to.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      const auto mid = std::lower_bound(to.begin(), to.end(), p.real(),
                                        [](cplx x, double r) { return x.real() < r; });
      for (auto it = mid; it != to.end() && it->real() - p.real() < best; ++it) best = std::min(best, std::abs(*it - p));
      for (auto it = mid; it != to.begin();) {
        --it;
        if (p.real() - it->real() >= best) break;
        best = std::min(best, std::abs(*it - p));
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace floquet
