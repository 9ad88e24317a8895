#pragma once

// Matrix-valued Laurent polynomials h(beta) = sum_n h_n beta^n and the
// characteristic polynomial det[h(beta) - E] as a polynomial in E with
// scalar Laurent coefficients.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "floquet/errors.hpp"

namespace floquet {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

// Scalar Laurent polynomial sum_{n=lowest}^{lowest+size-1} c_n beta^n.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(int lowest, std::vector<cplx> coeffs) : lowest_(lowest), c_(std::move(coeffs)) {
    normalize();
  }

  static LaurentPoly constant(cplx c) { return LaurentPoly(0, {c}); }
  static LaurentPoly monomial(int n, cplx c) { return LaurentPoly(n, {c}); }

  bool is_zero() const { return c_.empty(); }
  int lowest() const { return lowest_; }
  int highest() const { return lowest_ + static_cast<int>(c_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return c_; }

  cplx coeff(int n) const {
    const int i = n - lowest_;
    return (i < 0 || i >= static_cast<int>(c_.size())) ? cplx{} : c_[i];
  }

  cplx operator()(cplx beta) const {
    if (c_.empty()) return {};
    if (beta == cplx{} && lowest_ < 0) throw DomainError("LaurentPoly: evaluation at beta = 0");
    cplx acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * beta + *it;
    return acc * ipow(beta, lowest_);
  }

  // d/dbeta evaluated at beta.
  cplx derivative(cplx beta) const {
    cplx acc{};
    for (int i = 0; i < static_cast<int>(c_.size()); ++i) {
      const int n = lowest_ + i;
      if (n != 0 && c_[i] != cplx{}) acc += static_cast<double>(n) * c_[i] * ipow(beta, n - 1);
    }
    return acc;
  }

  // sum_n |c_n| |beta|^n, the natural scale for backward errors.
  double abs_sum(double radius) const {
    double acc = 0.0;
    for (int i = 0; i < static_cast<int>(c_.size()); ++i)
      acc += std::abs(c_[i]) * std::pow(radius, lowest_ + i);
    return acc;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  // Drops edge coefficients below rel_tol * max|c_n|.
  LaurentPoly trimmed(double rel_tol) const {
    const double cut = rel_tol * max_abs();
    std::size_t a = 0, b = c_.size();
    while (a < b && std::abs(c_[a]) <= cut) ++a;
    while (b > a && std::abs(c_[b - 1]) <= cut) --b;
    return LaurentPoly(lowest_ + static_cast<int>(a), {c_.begin() + a, c_.begin() + b});
  }

  // p(w * beta) as a Laurent polynomial in beta.
  LaurentPoly rescaled(cplx w) const {
    std::vector<cplx> out(c_);
    for (int i = 0; i < static_cast<int>(out.size()); ++i) out[i] *= ipow(w, lowest_ + i);
    return LaurentPoly(lowest_, std::move(out));
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    const int lo = std::min(lowest_, o.lowest_);
    const int hi = std::max(highest(), o.highest());
    std::vector<cplx> out(hi - lo + 1);
    for (int n = lo; n <= hi; ++n) out[n - lo] = coeff(n) + o.coeff(n);
    lowest_ = lo;
    c_ = std::move(out);
    normalize();
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this += o * cplx{-1.0}; }
  LaurentPoly& operator*=(cplx s) {
    if (s == cplx{}) c_.clear();
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, cplx s) { return a *= s; }
  friend LaurentPoly operator*(cplx s, LaurentPoly a) { return a *= s; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<cplx> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return LaurentPoly(a.lowest_ + b.lowest_, std::move(out));
  }

  static cplx ipow(cplx z, int n) {
    if (n == 0) return 1.0;
    cplx base = n > 0 ? z : 1.0 / z;
    unsigned k = static_cast<unsigned>(n > 0 ? n : -n);
    cplx r = 1.0;
    while (k) {
      if (k & 1u) r *= base;
      base *= base;
      k >>= 1u;
    }
    return r;
  }

 private:
  // Exact zeros only; numerical trimming is explicit via trimmed().
  void normalize() {
    std::size_t a = 0, b = c_.size();
    while (a < b && c_[a] == cplx{}) ++a;
    while (b > a && c_[b - 1] == cplx{}) --b;
    if (a == b) {
      c_.clear();
      lowest_ = 0;
      return;
    }
    if (a > 0 || b < c_.size()) c_ = std::vector<cplx>(c_.begin() + a, c_.begin() + b);
    lowest_ += static_cast<int>(a);
  }

  int lowest_ = 0;
  std::vector<cplx> c_;
};

// h(beta) = sum_{n=-m}^{m} h_n beta^n with q x q coefficient matrices, stored
// densely over [-m, m]. The range m is kept tight: h_{-m} or h_{+m} is nonzero
// unless the polynomial is identically zero (then m = 0).
class LaurentMatrixPoly {
 public:
  LaurentMatrixPoly() : LaurentMatrixPoly(1) {}
  explicit LaurentMatrixPoly(int q) : q_(q), m_(0), h_{Matrix::Zero(q, q)} {
    if (q < 1) throw ConfigError("LaurentMatrixPoly: orbital count must be positive");
  }

  // Coefficients given as (exponent, matrix) pairs; repeated exponents add up.
  LaurentMatrixPoly(int q, const std::vector<std::pair<int, Matrix>>& terms) : LaurentMatrixPoly(q) {
    for (const auto& [n, mat] : terms) add_term(n, mat);
  }

  // Scalar (q = 1) convenience: (exponent, value) pairs.
  static LaurentMatrixPoly scalar(const std::vector<std::pair<int, cplx>>& terms) {
    LaurentMatrixPoly p(1);
    for (const auto& [n, v] : terms) p.add_term(n, Matrix::Constant(1, 1, v));
    return p;
  }

  int q() const { return q_; }
  int m() const { return m_; }

  Matrix coeff(int n) const { return std::abs(n) > m_ ? Matrix::Zero(q_, q_) : h_[n + m_]; }

  void add_term(int n, const Matrix& mat) {
    if (mat.rows() != q_ || mat.cols() != q_)
      throw ConfigError("LaurentMatrixPoly: coefficient shape does not match q");
    grow(std::abs(n));
    h_[n + m_] += mat;
    tighten();
  }

  Matrix operator()(cplx beta) const {
    if (beta == cplx{}) throw DomainError("LaurentMatrixPoly: evaluation at beta = 0 (Laurent pole)");
    Matrix out = Matrix::Zero(q_, q_);
    for (int n = -m_; n <= m_; ++n)
      if (!h_[n + m_].isZero(0.0)) out += h_[n + m_] * LaurentPoly::ipow(beta, n);
    return out;
  }

  // Entry (i, j) as a scalar Laurent polynomial.
  LaurentPoly entry(int i, int j) const {
    std::vector<cplx> c(2 * m_ + 1);
    for (int n = -m_; n <= m_; ++n) c[n + m_] = h_[n + m_](i, j);
    return LaurentPoly(-m_, std::move(c));
  }

  Matrix sum_of_coefficients() const {
    Matrix s = Matrix::Zero(q_, q_);
    for (const auto& mat : h_) s += mat;
    return s;
  }

  bool is_zero() const {
    return std::all_of(h_.begin(), h_.end(), [](const Matrix& x) { return x.isZero(0.0); });
  }

  LaurentMatrixPoly& operator+=(const LaurentMatrixPoly& o) {
    if (o.q_ != q_) throw ConfigError("LaurentMatrixPoly: orbital count mismatch");
    for (int n = -o.m_; n <= o.m_; ++n) {
      grow(std::abs(n));
      h_[n + m_] += o.h_[n + o.m_];
    }
    tighten();
    return *this;
  }
  friend LaurentMatrixPoly operator+(LaurentMatrixPoly a, const LaurentMatrixPoly& b) { return a += b; }
  friend LaurentMatrixPoly operator*(cplx s, LaurentMatrixPoly a) {
    for (auto& mat : a.h_) mat *= s;
    a.tighten();
    return a;
  }

 private:
  void grow(int m) {
    if (m <= m_) return;
    std::vector<Matrix> h(2 * m + 1, Matrix::Zero(q_, q_));
    for (int n = -m_; n <= m_; ++n) h[n + m] = h_[n + m_];
    h_ = std::move(h);
    m_ = m;
  }
  void tighten() {
    int m = m_;
    while (m > 0 && h_[m_ - m].isZero(0.0) && h_[m_ + m].isZero(0.0)) --m;
    if (m == m_) return;
    std::vector<Matrix> h(h_.begin() + (m_ - m), h_.begin() + (m_ + m + 1));
    h_ = std::move(h);
    m_ = m;
  }

  int q_;
  int m_;
  std::vector<Matrix> h_;
};

// f(beta, E) = det[h(beta) - E] = sum_k coeffsE[k](beta) E^k.
struct CharPoly {
  int q = 1;  // degree in E
  int m = 0;  // hopping range of the source h(beta)
  std::vector<LaurentPoly> coeffsE;

  int degE() const { return q; }
  // Number of beta-roots of f(beta, E) = 0 at generic E, i.e. 2M with M = m q.
  int root_count() const { return 2 * m * q; }

  cplx operator()(cplx beta, cplx E) const {
    cplx acc{};
    for (int k = q; k >= 0; --k) acc = acc * E + coeffsE[k](beta);
    return acc;
  }
  cplx d_beta(cplx beta, cplx E) const {
    cplx acc{};
    for (int k = q; k >= 0; --k) acc = acc * E + coeffsE[k].derivative(beta);
    return acc;
  }
  cplx d_E(cplx beta, cplx E) const {
    cplx acc{};
    for (int k = q; k >= 1; --k) acc = acc * E + static_cast<double>(k) * coeffsE[k](beta);
    return acc;
  }
  // sum_k sum_n |c_kn| |beta|^n |E|^k, the scale against which |f| is judged.
  double scale(cplx beta, cplx E) const {
    double acc = 0.0;
    const double r = std::abs(beta), e = std::abs(E);
    for (int k = q; k >= 0; --k) acc = acc * e + coeffsE[k].abs_sum(r);
    return acc;
  }

  // Coefficients in E (ascending) of f(beta, E) at fixed beta.
  std::vector<cplx> e_coeffs(cplx beta) const {
    std::vector<cplx> out(q + 1);
    for (int k = 0; k <= q; ++k) out[k] = coeffsE[k](beta);
    return out;
  }

  // f(beta, E) as a Laurent polynomial in beta at fixed E.
  LaurentPoly at_energy(cplx E) const {
    LaurentPoly acc;
    cplx Ek = 1.0;
    for (int k = 0; k <= q; ++k, Ek *= E) acc += coeffsE[k] * Ek;
    return acc;
  }
};

namespace detail {

using LaurentMat = std::vector<std::vector<LaurentPoly>>;

inline LaurentMat mat_mul(const LaurentMat& a, const LaurentMat& b) {
  const std::size_t q = a.size();
  LaurentMat out(q, std::vector<LaurentPoly>(q));
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t k = 0; k < q; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < q; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

}  // namespace detail

// Faddeev-LeVerrier over the ring of Laurent polynomials:
//   M_0 = 0, c_q = 1, M_k = A M_{k-1} + c_{q-k+1} I, c_{q-k} = -tr(A M_k) / k
// gives det(E I - A) = sum_k c_k E^k. Only the division by the integer k leaves
// the ring, so no polynomial division is ever needed.
inline CharPoly char_poly(const LaurentMatrixPoly& h) {
  const int q = h.q();
  detail::LaurentMat A(q, std::vector<LaurentPoly>(q));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) A[i][j] = h.entry(i, j);

  std::vector<LaurentPoly> c(q + 1);
  c[q] = LaurentPoly::constant(1.0);
  detail::LaurentMat M(q, std::vector<LaurentPoly>(q));
  for (int k = 1; k <= q; ++k) {
    detail::LaurentMat next = detail::mat_mul(A, M);
    for (int i = 0; i < q; ++i) next[i][i] += c[q - k + 1];
    M = std::move(next);
    const detail::LaurentMat AM = detail::mat_mul(A, M);
    LaurentPoly tr;
    for (int i = 0; i < q; ++i) tr += AM[i][i];
    c[q - k] = tr * cplx(-1.0 / k);
  }

  CharPoly f;
  f.q = q;
  f.m = h.m();
  f.coeffsE.resize(q + 1);
  const double sign = (q % 2 == 0) ? 1.0 : -1.0;  // det(A - E) = (-1)^q det(E - A)
  for (int k = 0; k <= q; ++k) f.coeffsE[k] = c[k] * cplx(sign);
  return f;
}

// Piecewise-constant h(beta, t): segment k acts for a fraction tau_k of the period.
struct TimedLaurentPoly {
  struct Segment {
    double fraction;
    LaurentMatrixPoly h;
  };
  std::vector<Segment> segments;
  double period = 1.0;

  TimedLaurentPoly() = default;
  TimedLaurentPoly(std::vector<Segment> segs, double T) : segments(std::move(segs)), period(T) { validate(); }

  void validate() const {
    if (segments.empty()) throw ConfigError("TimedLaurentPoly: no segments");
    double total = 0.0;
    for (const auto& s : segments) {
      if (!(s.fraction > 0.0 && s.fraction <= 1.0))
        throw ConfigError("TimedLaurentPoly: duration fraction outside (0, 1]");
      if (s.h.q() != segments.front().h.q()) throw ConfigError("TimedLaurentPoly: orbital count mismatch");
      total += s.fraction;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("TimedLaurentPoly: duration fractions must sum to 1");
    if (!(period > 0.0)) throw ConfigError("TimedLaurentPoly: period must be positive");
  }
};

// h_F(beta) = (1/T) int_0^T h(beta, t) dt = sum_k tau_k h_k(beta).
inline LaurentMatrixPoly time_average(const TimedLaurentPoly& ht) {
  LaurentMatrixPoly avg(ht.segments.front().h.q());
  for (const auto& s : ht.segments) avg += cplx(s.fraction) * s.h;
  return avg;
}

struct CommutationReport {
  bool commutes = true;
  double max_residual = 0.0;
};

// Max Frobenius norm of [h_j(beta), h_k(beta)] over all segment pairs and
// `samples` pseudo-random beta on the annulus 0.5 <= |beta| <= 2 (fixed seed).
inline CommutationReport commutation_check(const TimedLaurentPoly& ht, int samples, double tol = 1e-10) {
  if (samples < 1) throw ConfigError("commutation_check: samples must be >= 1");
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> logr(std::log(0.5), std::log(2.0));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  CommutationReport rep;
  if (ht.segments.front().h.q() == 1) return rep;  // scalars commute identically
  const std::size_t n = ht.segments.size();
  for (int s = 0; s < samples; ++s) {
    const cplx beta = std::polar(std::exp(logr(rng)), phase(rng));
    std::vector<Matrix> vals;
    vals.reserve(n);
    for (const auto& seg : ht.segments) vals.push_back(seg.h(beta));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        rep.max_residual = std::max(rep.max_residual, (vals[i] * vals[j] - vals[j] * vals[i]).norm());
  }
  rep.commutes = rep.max_residual < tol;
  return rep;
}

}  // namespace floquet
