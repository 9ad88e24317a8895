#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "floquet/models.hpp"
#include "floquet/polyroots.hpp"
#include "helpers.hpp"

using namespace floquet;

TEST_CASE("beta^2 - 1") {
  const RootList r = poly_roots({-1.0, 0.0, 1.0});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r.roots[0] - cplx(1.0)) < 1e-14);  // arg 0 before arg pi
  CHECK(std::abs(r.roots[1] - cplx(-1.0)) < 1e-14);
}

TEST_CASE("beta^2 + 1: equal moduli ordered by argument") {
  const RootList r = poly_roots({1.0, 0.0, 1.0});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r.roots[0] - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(r.roots[1] - cplx(0, 1)) < 1e-14);
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(poly_roots({0.0, 0.0}), DomainError);
  CHECK(poly_roots({3.0}).size() == 0);
  CHECK(poly_roots({3.0, 0.0}).size() == 0);  // trailing exact zeros trimmed
}

TEST_CASE("random degree-8 polynomials from known roots") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> roots;
    for (int k = 0; k < 8; ++k) roots.push_back(th::rand_cplx(rng));
    const RootList r = poly_roots(th::from_roots(roots, th::rand_cplx(rng) + 2.0));
    REQUIRE(r.size() == 8);
    for (const auto& z : roots) {
      double best = 1e300;
      for (const auto& w : r.roots) best = std::min(best, std::abs(z - w));
      CHECK(best < 1e-8);
    }
    for (std::size_t i = 0; i + 1 < r.size(); ++i) CHECK(std::abs(r.roots[i]) <= std::abs(r.roots[i + 1]) * (1 + 1e-12));
    for (double res : r.residuals) CHECK(res <= 1e-8);
  }
}

TEST_CASE("Vieta sums and products") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 7;
    std::vector<cplx> c(d + 1);
    for (auto& x : c) x = th::rand_cplx(rng);
    const RootList r = poly_roots(c);
    cplx sum{}, prod = 1.0;
    for (const auto& z : r.roots) {
      sum += z;
      prod *= z;
    }
    const cplx esum = -c[d - 1] / c[d];
    const cplx eprod = (d % 2 == 0 ? 1.0 : -1.0) * c[0] / c[d];
    CHECK(std::abs(sum - esum) <= 1e-8 * std::max(1.0, std::abs(esum)));
    CHECK(std::abs(prod - eprod) <= 1e-8 * std::max(1.0, std::abs(eprod)));
  }
}

TEST_CASE("laurent roots of beta + 1/beta - E at E = 0") {
  const CharPoly f = char_poly(LaurentMatrixPoly::scalar({{1, 1.0}, {-1, 1.0}}));
  const RootList r = laurent_roots(f, 0.0);
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r.roots[0] - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(r.roots[1] - cplx(0, 1)) < 1e-14);
  CHECK_FALSE(r.flagged());
}

TEST_CASE("single-band root product is (t2 - gamma)/(t2 + gamma) for any E") {
  const CharPoly f = char_poly(single_band_bloch(2.0, 0.15, 0.16));
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const RootList r = laurent_roots(f, th::rand_cplx(rng, 3.0));
    REQUIRE(r.size() == 4);
    cplx prod = 1.0;
    for (const auto& z : r.roots) prod *= z;
    CHECK(std::abs(prod - cplx(-0.01 / 0.31)) < 1e-10);
  }
}

TEST_CASE("Hatano-Nelson: equal-modulus roots sit on the radius sqrt|(t-g)/(t+g)|") {
  const double t = 1.0, g = 0.4;
  const CharPoly f = char_poly(LaurentMatrixPoly::scalar({{1, t + g}, {-1, t - g}}));
  const double rad = std::sqrt((t - g) / (t + g));
  for (double E : {-1.5, -0.3, 0.0, 0.8, 1.7}) {  // inside the OBC band (-2 sqrt(t^2-g^2), ..)
    const RootList r = laurent_roots(f, E);
    REQUIRE(r.size() == 2);
    CHECK(std::abs(std::abs(r.roots[0]) - std::abs(r.roots[1])) < 1e-12);
    CHECK(std::abs(std::abs(r.roots[0]) - rad) < 1e-12);
  }
}

TEST_CASE("laurent roots do not depend on an overall scale of f") {
  CharPoly f = char_poly(single_band_bloch(2.0, 0.15, 0.16));
  CharPoly g = f;
  for (auto& c : g.coeffsE) c *= cplx(-3.0, 7.0);
  const cplx E(0.4, 0.2);
  const RootList a = laurent_roots(f, E), b = laurent_roots(g, E);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.roots[i] - b.roots[i]) < 1e-12);
}

TEST_CASE("degenerate edge coefficients are flagged") {
  // t2 = gamma kills the beta^-2 coefficient.
  const CharPoly f = char_poly(single_band_bloch(2.0, 0.2, 0.2));
  const RootList r = laurent_roots(f, 0.5);
  CHECK(r.flagged());
  CHECK(r.missing_at_zero == 1);
  CHECK(r.size() == 3);

  CharPoly zero;
  zero.q = 1;
  zero.m = 1;
  zero.coeffsE = {LaurentPoly(), LaurentPoly()};
  CHECK_THROWS_AS(laurent_roots(zero, 1.0), DomainError);
}

TEST_CASE("middle pair gap for the Hermitian chain") {
  const CharPoly f = char_poly(LaurentMatrixPoly::scalar({{1, 1.0}, {-1, 1.0}}));
  for (double E : {-1.9, -0.5, 0.0, 1.2}) CHECK(middle_pair_gap(f, {0.0}, E) < 1e-12);
  const double g3 = middle_pair_gap(f, {0.0}, 3.0);
  // roots (3 +- sqrt 5)/2
  CHECK(std::abs(g3 - std::log((3 + std::sqrt(5.0)) / (3 - std::sqrt(5.0)))) < 1e-12);
}

TEST_CASE("middle pair gap is continuous in E away from degeneracies") {
  const CharPoly f = char_poly(single_band_bloch(2.0, 0.15, 0.16));
  const auto shifts = floquet_shifts(1, 2.0);
  const cplx E0(0.7, 0.35);
  const double g0 = middle_pair_gap(f, shifts, E0);
  for (double h : {1e-3, 1e-5, 1e-7}) CHECK(std::abs(middle_pair_gap(f, shifts, E0 + h) - g0) < 50 * h);
}

TEST_CASE("floquet shifts") {
  const auto s = floquet_shifts(2, 0.5);
  REQUIRE(s.size() == 5);
  CHECK(std::abs(s[0] + cplx(8 * kPi)) < 1e-12);
  CHECK(s[2] == cplx{});
  const PooledRoots pr = pooled_roots(char_poly(single_band_bloch(2, 0.15, 0.16)), s, 0.3);
  CHECK(pr.K == 10);
  CHECK(pr.roots.size() == 20);
  CHECK_THROWS_AS(pooled_roots(char_poly(single_band_bloch(2, 0.15, 0.16)), {}, 0.3), ConfigError);
}
