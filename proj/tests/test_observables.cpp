#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "floquet/observables.hpp"
#include "helpers.hpp"

using namespace floquet;

namespace {

ParamMap single_band(double T, int L, double gamma = 0.16, double V = 0.01) {
  return {{"t1", 2.0}, {"t2", 0.15}, {"gamma", gamma}, {"V", V}, {"T", T}, {"L", L}};
}

}  // namespace

TEST_CASE("eta examples") {
  CHECK(std::abs(eta_fraction(SpectrumSet{{1.0, cplx(0, 1), cplx(0, -1)}}) - 2.0 / 3.0) < 1e-15);
  CHECK(eta_fraction(SpectrumSet{{1.0, -2.0, 3.5}}) == 0.0);
  CHECK(eta_fraction(SpectrumSet{{0.0, 0.0}}) == 0.0);
  CHECK(eta_fraction(SpectrumSet{{1.0, cplx(1, 1e-3)}}, 1e-2) == 0.0);
  CHECK_THROWS_AS(eta_fraction(SpectrumSet{}), DomainError);
  CHECK_THROWS_AS(eta_fraction(SpectrumSet{{1.0}}, 0.0), ConfigError);
}

TEST_CASE("Hermitian lattice has eta = 0") {
  const SpectrumSet s = oracle_spectrum(build_model("single_band", single_band(0.9, 60, 0.0)));
  CHECK(eta_fraction(s) == 0.0);
}

TEST_CASE("Hausdorff examples") {
  CHECK(hausdorff_points({0.0}, {cplx(3, 4)}) == 5.0);
  const std::vector<cplx> a{1.0, cplx(0, 2), cplx(-1, -1)};
  CHECK(hausdorff_points(a, a) == 0.0);
  CHECK(std::abs(hausdorff_points({0.0, 10.0}, {0.0}) - 10.0) < 1e-15);
  CHECK_THROWS_AS(hausdorff_points({}, a), DomainError);
  CHECK_THROWS_AS(hausdorff(GBZCurve{}, GBZCurve{}), DomainError);
}

TEST_CASE("Hausdorff is a metric on random point sets") {
  std::mt19937_64 rng(11);
  auto draw = [&] {
    std::vector<cplx> v(1 + rng() % 12);
    for (auto& z : v) z = th::rand_cplx(rng, 2.0);
    return v;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = draw(), b = draw(), c = draw();
    const double ab = hausdorff_points(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab == hausdorff_points(b, a));
    CHECK(ab <= hausdorff_points(a, c) + hausdorff_points(c, b) + 1e-12);
  }
}

TEST_CASE("phase diagram of the Hermitian chain is identically zero") {
  PhaseDiagramOptions o;
  o.oracle.precision = Precision::standard;
  const PhaseDiagram pd =
      phase_diagram("single_band", {"L", {10, 20, 30}}, {"V", {0.0, 0.05, 0.5}}, single_band(0.9, 0, 0.0), o);
  REQUIRE(pd.values.size() == 9);
  CHECK(pd.errors.empty());
  for (double eta : pd.values) CHECK(eta == 0.0);
  for (double x : onset_along(pd)) CHECK(std::isnan(x));
}

TEST_CASE("failed cells are NaN with a message") {
  PhaseDiagramOptions o;
  o.oracle.precision = Precision::standard;
  const PhaseDiagram pd = phase_diagram("single_band", {"L", {0, 80}}, {"T", {0.9, 2.0}}, single_band(0, 0), o);
  CHECK(pd.errors.size() == 2);
  CHECK(std::isnan(pd.at(0, 0)));
  CHECK(std::isnan(pd.at(0, 1)));
  CHECK(pd.at(1, 1) > 0.0);
  CHECK(pd.errors.count(0) == 1);
}

TEST_CASE("phase diagram argument checks") {
  CHECK_THROWS_AS(phase_diagram("single_band", {"L", {10}}, {"V", {0, 1}}, single_band(1, 0)), ConfigError);
  CHECK_THROWS_AS(phase_diagram("single_band", {"V", {0, 1}}, {"V", {0, 1}}, single_band(1, 10)), ConfigError);
}

TEST_CASE("onset along the length axis") {
  PhaseDiagram pd;
  pd.axis1 = {"L", {30, 10, 20}};
  pd.axis2 = {"V", {0.1, 0.2}};
  pd.values = {0.5, 0.0,   // L = 30
               0.0, 0.0,   // L = 10
               0.2, 0.0};  // L = 20
  const auto on = onset_along(pd);
  REQUIRE(on.size() == 2);
  CHECK(on[0] == 20.0);
  CHECK(std::isnan(on[1]));
  const auto on2 = onset_along(pd, 2);
  REQUIRE(on2.size() == 3);
  CHECK(on2[0] == 0.1);
}

TEST_CASE("Lyapunov trace of a Hermitian drive stays flat") {
  const DriveProtocol p = build_model("single_band", single_band(0.9, 40, 0.0, 0.2));
  const LyapunovTrace tr = lyapunov(p, middle_site(p), 200);
  REQUIRE(tr.logNorm.size() == 201);
  CHECK(tr.logNorm[0] == 0.0);
  CHECK(tr.lambdaEst[0] == 0.0);
  CHECK(std::abs(tr.lambda) < 1e-12);
  for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
  CHECK(tr.window == std::pair<int, int>{100, 200});
}

TEST_CASE("growth rate is bounded by the finite-L spectrum") {
  const DriveProtocol p = build_model("single_band", single_band(2.0, 80));
  const LyapunovTrace tr = lyapunov(p, middle_site(p), 800);
  const SpectrumSet s = oracle_spectrum(p);
  double maxIm = -1e300;
  for (const auto& e : s.values) maxIm = std::max(maxIm, e.imag());
  CHECK(tr.lambda > 0.0);
  CHECK(tr.lambda <= maxIm + 1e-6);
  CHECK(std::abs(tr.lambda - maxIm) < 0.05 * maxIm);
}

TEST_CASE("standard and extended Lyapunov traces agree over a short run") {
  const DriveProtocol p = build_model("single_band", single_band(2.0, 20));
  LyapunovOptions o;
  o.precision = Precision::standard;
  const LyapunovTrace a = lyapunov(p, 3, 50), b = lyapunov(p, 3, 50, o);
  for (std::size_t i = 0; i < a.logNorm.size(); ++i) CHECK(std::abs(a.logNorm[i] - b.logNorm[i]) < 1e-9);
}

TEST_CASE("lyapunov argument checks") {
  const DriveProtocol p = build_model("single_band", single_band(1.0, 10));
  CHECK_THROWS_AS(lyapunov(p, -1, 10), ConfigError);
  CHECK_THROWS_AS(lyapunov(p, 10, 10), ConfigError);
  CHECK_THROWS_AS(lyapunov(p, 0, 0), ConfigError);
  CHECK(middle_site(p) == 5);
}
