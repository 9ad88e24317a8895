#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "floquet/laurent.hpp"
#include "floquet/models.hpp"
#include "helpers.hpp"

using namespace floquet;
using Catch::Matchers::WithinAbs;

namespace {

Matrix pauli(char which) {
  Matrix s(2, 2);
  if (which == 'x') s << 0, 1, 1, 0;
  if (which == 'y') s << 0, cplx(0, -1), cplx(0, 1), 0;
  if (which == 'z') s << 1, 0, 0, -1;
  return s;
}

}  // namespace

TEST_CASE("eval at beta = 1 sums the coefficients") {
  const auto h = single_band_bloch(2.0, 0.15, 0.16);
  CHECK_THAT(std::abs(h(1.0)(0, 0) - cplx(4.3)), WithinAbs(0.0, 1e-14));
  CHECK((h(1.0) - h.sum_of_coefficients()).norm() < 1e-14);

  LaurentMatrixPoly zero(3);
  CHECK(zero(1.0).isZero(0.0));
  CHECK(zero.m() == 0);
}

TEST_CASE("two-band h at beta = i, entry by entry") {
  const double t = 1, g = 0.5, mu = 2.5, d = 0.1;
  const cplx b(0, 1);
  const Matrix h = two_band_bloch(t, g, mu, d)(b);
  CHECK(std::abs(h(0, 0) - ((t + g) * b + (t - g) / b + mu)) < 1e-14);
  CHECK(std::abs(h(1, 1) - ((t - g) * b + (t + g) / b - mu)) < 1e-14);
  CHECK(std::abs(h(0, 0) - cplx(2.5, 1.0)) < 1e-14);
  CHECK(std::abs(h(1, 1) - cplx(-2.5, -1.0)) < 1e-14);
  CHECK(std::abs(h(0, 1) - d) < 1e-14);
  CHECK(std::abs(h(1, 0) - d) < 1e-14);
}

TEST_CASE("beta = 0 is a pole") {
  const auto h = single_band_bloch(2.0, 0.15, 0.16);
  CHECK_THROWS_AS(h(0.0), DomainError);
  CHECK_THROWS_AS(char_poly(h)(0.0, 1.0), DomainError);
}

TEST_CASE("m stays tight") {
  auto h = LaurentMatrixPoly::scalar({{2, 1.0}, {-1, 3.0}});
  CHECK(h.m() == 2);
  h.add_term(2, Matrix::Constant(1, 1, -1.0));
  CHECK(h.m() == 1);
}

TEST_CASE("char_poly for q = 1 is h - E") {
  const auto h = single_band_bloch(2.0, 0.15, 0.16);
  const CharPoly f = char_poly(h);
  REQUIRE(f.degE() == 1);
  CHECK(f.root_count() == 4);
  const cplx b(0.7, -0.4);
  CHECK(std::abs(f.coeffsE[0](b) - h(b)(0, 0)) < 1e-14);
  CHECK(std::abs(f.coeffsE[1](b) - cplx(-1.0)) < 1e-14);
}

TEST_CASE("char_poly for the two-band model is (a - E)(d - E) - delta^2") {
  const double t = 1, g = 0.5, mu = 2.5, d = 0.1;
  const CharPoly f = char_poly(two_band_bloch(t, g, mu, d));
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const cplx b = std::polar(std::exp(0.5 * th::rand_cplx(rng).real()), th::rand_cplx(rng).real());
    const cplx E = th::rand_cplx(rng, 2.0);
    const cplx a = (t + g) * b + (t - g) / b + mu;
    const cplx dd = (t - g) * b + (t + g) / b - mu;
    const cplx ref = (a - E) * (dd - E) - d * d;
    CHECK(std::abs(f(b, E) - ref) <= 1e-12 * (1 + std::abs(ref)));
  }
}

TEST_CASE("char_poly matches det[h - E] on random probes") {
  std::mt19937_64 rng(7);
  for (int q = 1; q <= 4; ++q) {
    std::vector<std::pair<int, Matrix>> terms;
    for (int n = -2; n <= 2; ++n) {
      Matrix hn(q, q);
      for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) hn(i, j) = th::rand_cplx(rng);
      terms.push_back({n, hn});
    }
    const LaurentMatrixPoly h(q, terms);
    const CharPoly f = char_poly(h);
    for (int k = 0; k < 50; ++k) {
      const cplx b = std::polar(std::exp(0.4 * th::rand_cplx(rng).real()), 3.0 * th::rand_cplx(rng).real());
      const cplx E = th::rand_cplx(rng, 2.0);
      const cplx det = (h(b) - E * Matrix::Identity(q, q)).determinant();
      CHECK(std::abs(f(b, E) - det) <= 1e-10 * (1 + std::abs(det)));
    }
  }
}

TEST_CASE("char_poly coefficient span stays within [-mq, mq]") {
  const CharPoly f = char_poly(two_band_bloch(1, 0.5, 2.5, 0.1));
  for (const auto& c : f.coeffsE) {
    CHECK(c.lowest() >= -f.m * f.q);
    CHECK(c.highest() <= f.m * f.q);
  }
}

TEST_CASE("time average of the four-step drive") {
  const double t1 = 1, t2 = 0.08, g1 = 0.1, g2 = 0.07;
  const auto hs = four_step_bloch(t1, t2, g1, g2);
  std::vector<TimedLaurentPoly::Segment> segs;
  for (const auto& h : hs) segs.push_back({0.25, h});
  const LaurentMatrixPoly hF = time_average(TimedLaurentPoly(segs, 7.5));
  const auto ref = LaurentMatrixPoly::scalar({{1, 0.25 * (t1 + g1)},
                                              {-1, 0.25 * (t1 - g1)},
                                              {2, 0.25 * (t2 + g2)},
                                              {-2, 0.25 * (t2 - g2)}});
  for (int n = -2; n <= 2; ++n) CHECK(std::abs(hF.coeff(n)(0, 0) - ref.coeff(n)(0, 0)) < 1e-15);
}

TEST_CASE("time average edge cases") {
  const auto A = two_band_bloch(1, 0.5, 2.5, 0.1);
  const LaurentMatrixPoly single = time_average(TimedLaurentPoly({{1.0, A}}, 1.0));
  for (int n = -1; n <= 1; ++n) CHECK((single.coeff(n) - A.coeff(n)).norm() < 1e-15);

  const LaurentMatrixPoly cancel = time_average(TimedLaurentPoly({{0.5, A}, {0.5, cplx(-1.0) * A}}, 1.0));
  CHECK(cancel.is_zero());

  // Constant protocol: averaging is idempotent.
  const LaurentMatrixPoly twice = time_average(TimedLaurentPoly({{0.3, single}, {0.7, single}}, 2.0));
  for (int n = -1; n <= 1; ++n) CHECK((twice.coeff(n) - A.coeff(n)).norm() < 1e-14);
}

TEST_CASE("time average is linear") {
  const auto A = two_band_bloch(1, 0.5, 2.5, 0.1), B = two_band_bloch(0.3, -0.2, 1.0, 0.7);
  const auto avg = time_average(TimedLaurentPoly({{0.25, A}, {0.75, B}}, 1.0));
  const cplx b(0.4, 0.9);
  CHECK((avg(b) - (0.25 * A(b) + 0.75 * B(b))).norm() < 1e-14);
}

TEST_CASE("fractions must sum to one") {
  const auto A = single_band_bloch(1, 0, 0);
  CHECK_THROWS_AS(TimedLaurentPoly({{0.5, A}, {0.4, A}}, 1.0), ConfigError);
  CHECK_THROWS_AS(TimedLaurentPoly({{0.0, A}, {1.0, A}}, 1.0), ConfigError);
}

TEST_CASE("commutation check") {
  const auto s1 = single_band_bloch(2, 0.15, 0.16), s2 = single_band_bloch(-1, 0.3, 0.0);
  const auto rep1 = commutation_check(TimedLaurentPoly({{0.5, s1}, {0.5, s2}}, 1.0), 16);
  CHECK(rep1.commutes);
  CHECK(rep1.max_residual == 0.0);

  const auto hs = four_step_bloch(1, 0.08, 0.1, 0.07);
  std::vector<TimedLaurentPoly::Segment> segs;
  for (const auto& h : hs) segs.push_back({0.25, h});
  CHECK(commutation_check(TimedLaurentPoly(segs, 7.5), 16).commutes);

  const LaurentMatrixPoly hx(2, {{1, pauli('x')}}), hz(2, {{1, pauli('z')}});
  const auto rep2 = commutation_check(TimedLaurentPoly({{0.5, hx}, {0.5, hz}}, 1.0), 16);
  CHECK_FALSE(rep2.commutes);
  // ||[sx b, sz b]|| = ||2 i sy|| |b|^2 >= 2 sqrt(2) * 0.25
  CHECK(rep2.max_residual > 0.7);
  CHECK_THROWS_AS(commutation_check(TimedLaurentPoly({{1.0, hx}}, 1.0), 0), ConfigError);
}

TEST_CASE("non-commuting bulk segments cannot give h_F") {
  DriveProtocol p;
  p.q = 2;
  p.L = 4;
  p.segments = {{0.5, LaurentMatrixPoly(2, {{1, pauli('x')}}), {}}, {0.5, LaurentMatrixPoly(2, {{1, pauli('z')}}), {}}};
  CHECK_THROWS_AS(p.floquet_bloch(), ConfigError);
}

TEST_CASE("Vieta: root product of a q = 1 char poly is h_-m / h_m") {
  const auto h = single_band_bloch(2.0, 0.15, 0.16);
  const CharPoly f = char_poly(h);
  for (cplx E : {cplx(0.0), cplx(1.3, -0.2), cplx(-3.0, 2.0)}) {
    const auto c = f.at_energy(E).coeffs();
    // beta^2 f: the cleared quartic has c.front() = h_-2, c.back() = h_2.
    const cplx prod = c.front() / c.back();
    CHECK(std::abs(prod - cplx((0.15 - 0.16) / (0.15 + 0.16))) < 1e-14);
  }
}
