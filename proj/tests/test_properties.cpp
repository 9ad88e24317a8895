#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "floquet/gbz.hpp"
#include "floquet/observables.hpp"
#include "helpers.hpp"

using namespace floquet;

namespace {

constexpr int kDraws = 100;

double uni(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

ParamMap random_single_band(std::mt19937_64& rng, int L) {
  return {{"t1", uni(rng, 0.5, 2.5)}, {"t2", uni(rng, 0.0, 0.4)}, {"gamma", uni(rng, -0.4, 0.4)},
          {"V", uni(rng, 0.0, 0.5)},  {"T", uni(rng, 0.1, 3.0)},  {"L", L}};
}

ParamMap random_two_band(std::mt19937_64& rng, int L) {
  return {{"t", uni(rng, 0.5, 1.5)},    {"gamma", uni(rng, -0.6, 0.6)}, {"mu", uni(rng, -3.0, 3.0)},
          {"delta", uni(rng, -0.3, 0.3)}, {"V", uni(rng, 0.0, 0.5)},      {"T", uni(rng, 0.1, 2.0)},
          {"L", L}};
}

}  // namespace

TEST_CASE("finite-chain quasienergies are closed under conjugation") {
  std::mt19937_64 rng(101);
  OracleOptions o;
  o.precision = Precision::standard;
  for (int k = 0; k < kDraws; ++k) {
    const bool two = k % 2 == 1;
    const int L = 4 + static_cast<int>(rng() % 7);
    const DriveProtocol p = two ? build_model("two_band", random_two_band(rng, L))
                                : build_model("single_band", random_single_band(rng, L));
    const SpectrumSet s = oracle_spectrum(p, o);
    INFO("draw " << k);
    CHECK(th::conjugation_defect(s.values, p.T) < 1e-7 * (1 + s.spectral_radius()));
  }
}

TEST_CASE("PBC spectra of real Bloch Hamiltonians are closed under conjugation") {
  std::mt19937_64 rng(102);
  for (int k = 0; k < kDraws; ++k) {
    const ParamMap prm = random_two_band(rng, 1);
    const SpectrumSet s =
        pbc_spectrum(two_band_bloch(prm.at("t"), prm.at("gamma"), prm.at("mu"), prm.at("delta")), 24);
    CHECK(th::conjugation_defect(s.values) < 1e-10);
  }
}

TEST_CASE("static GBZ spectra are closed under conjugation") {
  std::mt19937_64 rng(103);
  GBZOptions o;
  o.agbz.theta_grid = 32;
  int nonempty = 0;
  for (int k = 0; k < kDraws; ++k) {
    const ParamMap prm = random_single_band(rng, 1);
    const FloquetGBZ g = static_gbz(char_poly(single_band_bloch(prm.at("t1"), prm.at("t2"), prm.at("gamma"))), o);
    INFO("draw " << k);
    if (g.spectrum.empty()) continue;
    ++nonempty;
    CHECK(th::conjugation_defect(g.spectrum.values) < 1e-7 * (1 + g.spectrum.spectral_radius()));
  }
  CHECK(nonempty >= kDraws * 9 / 10);
}

TEST_CASE("Floquet GBZ spectra are closed under conjugation on the cylinder") {
  std::mt19937_64 rng(108);
  GBZOptions o;
  o.agbz.theta_grid = 32;
  for (int k = 0; k < kDraws; ++k) {
    const ParamMap prm = random_single_band(rng, 1);
    const CharPoly f = char_poly(single_band_bloch(prm.at("t1"), prm.at("t2"), prm.at("gamma")));
    FloquetGBZ g;
    try {
      g = floquet_gbz(f, prm.at("T"), 1, o);
    } catch (const NonConvergenceError& e) {
      g = e.partial();
    }
    INFO("draw " << k << " T = " << prm.at("T"));
    REQUIRE(!g.spectrum.empty());
    CHECK(th::conjugation_defect(g.spectrum.values, g.T) < 1e-7 * (1 + g.spectrum.spectral_radius()));
  }
}

TEST_CASE("Vieta: root product is the ratio of the extreme coefficients") {
  std::mt19937_64 rng(104);
  for (int k = 0; k < kDraws; ++k) {
    const double t1 = uni(rng, 0.5, 2.5), t2 = uni(rng, 0.05, 0.4), g = uni(rng, -0.3, 0.3);
    if (std::abs(t2 - g) < 1e-3 || std::abs(t2 + g) < 1e-3) continue;
    const CharPoly f = char_poly(single_band_bloch(t1, t2, g));
    const cplx E = th::rand_cplx(rng, 4.0);
    const RootList r = laurent_roots(f, E);
    REQUIRE(r.size() == 4);
    cplx prod = 1.0, sum = 0.0;
    for (const auto& z : r.roots) {
      prod *= z;
      sum += z;
    }
    CHECK(std::abs(prod - (t2 - g) / (t2 + g)) < 1e-9 * std::max(1.0, std::abs((t2 - g) / (t2 + g))));
    CHECK(std::abs(sum + t1 / (t2 + g)) < 1e-9 * std::max(1.0, std::abs(t1 / (t2 + g))));
  }
}

TEST_CASE("det U_F = exp(-i T tr H_ave)") {
  std::mt19937_64 rng(105);
  for (int k = 0; k < kDraws; ++k) {
    const bool two = k % 2 == 0;
    const int L = 2 + static_cast<int>(rng() % 6);
    const DriveProtocol p = two ? build_model("two_band", random_two_band(rng, L))
                                : build_model("single_band", random_single_band(rng, L));
    const cplx det = floquet_unitary(p).determinant();
    const cplx ref = std::exp(cplx(0, -p.T) * p.averaged_hamiltonian().trace());
    CHECK(std::abs(det - ref) < 1e-9 * std::abs(ref));
  }
}

TEST_CASE("eta is invariant under zone shifts and conjugation") {
  std::mt19937_64 rng(106);
  for (int k = 0; k < kDraws; ++k) {
    const double T = uni(rng, 0.2, 3.0);
    SpectrumSet s;
    s.period = T;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      const cplx z(uni(rng, -kPi / T, kPi / T), rng() % 3 == 0 ? 0.0 : uni(rng, -1.0, 1.0));
      s.values.push_back(z);
    }
    const double tol = 1e-8 * std::max(1.0, s.spectral_radius());
    const double eta = eta_fraction(s, tol);
    SpectrumSet shifted = s, conj = s;
    for (auto& z : shifted.values) z = fold_quasienergy(z + 2.0 * kPi / T * static_cast<double>(1 + rng() % 3), T);
    for (auto& z : conj.values) z = std::conj(z);
    CHECK(eta_fraction(shifted, tol) == eta);
    CHECK(eta_fraction(conj, tol) == eta);
    CHECK(eta >= 0.0);
    CHECK(eta <= 1.0);
  }
}

TEST_CASE("Hausdorff distance between GBZ curves is a metric") {
  std::mt19937_64 rng(107);
  auto curve = [&] {
    GBZCurve c(1 + rng() % 10);
    for (auto& p : c) p.beta = th::rand_cplx(rng, 2.0);
    return c;
  };
  for (int k = 0; k < kDraws; ++k) {
    const GBZCurve a = curve(), b = curve(), c = curve();
    CHECK(hausdorff(a, a) == 0.0);
    CHECK(hausdorff(a, b) == hausdorff(b, a));
    CHECK(hausdorff(a, b) <= hausdorff(a, c) + hausdorff(c, b) + 1e-12);
  }
}
