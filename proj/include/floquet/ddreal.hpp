#pragma once

// Double-double real arithmetic (about 32 significant digits) for the
// extended-precision lattice oracle. Skin modes make the finite-chain
// Floquet operator extremely non-normal: rounding errors are amplified by
// roughly exp(L * max|log|beta||) over the GBZ, which exceeds 1/eps_double
// on chains of a few hundred sites.
//
// Algorithms follow the standard error-free transformations (two_sum,
// fma-based two_prod). Registered with Eigen through NumTraits so that
// Matrix<std::complex<ddreal>> works with the dense decompositions.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

namespace floquet {

struct ddreal {
  double hi = 0.0;
  double lo = 0.0;

  constexpr ddreal() = default;
  constexpr ddreal(double h) : hi(h) {}  // NOLINT(google-explicit-constructor)
  constexpr ddreal(int h) : hi(h) {}     // NOLINT(google-explicit-constructor)
  constexpr ddreal(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }

  ddreal& operator+=(const ddreal& b);
  ddreal& operator-=(const ddreal& b);
  ddreal& operator*=(const ddreal& b);
  ddreal& operator/=(const ddreal& b);
};

namespace dd_detail {

inline ddreal quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline ddreal two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline ddreal two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline ddreal operator-(const ddreal& a) { return {-a.hi, -a.lo}; }

inline ddreal operator+(const ddreal& a, const ddreal& b) {
  ddreal s = dd_detail::two_sum(a.hi, b.hi);
  const ddreal t = dd_detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd_detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline ddreal operator+(const ddreal& a, double b) {
  ddreal s = dd_detail::two_sum(a.hi, b);
  s.lo += a.lo;
  return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline ddreal operator-(const ddreal& a, const ddreal& b) { return a + (-b); }

inline ddreal operator*(const ddreal& a, const ddreal& b) {
  ddreal p = dd_detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline ddreal operator*(const ddreal& a, double b) {
  ddreal p = dd_detail::two_prod(a.hi, b);
  p.lo += a.lo * b;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline ddreal operator/(const ddreal& a, const ddreal& b) {
  const double q1 = a.hi / b.hi;
  ddreal r = a - b * q1;
  const double q2 = r.hi / b.hi;
  r -= b * q2;
  const double q3 = r.hi / b.hi;
  return dd_detail::quick_two_sum(q1, q2) + q3;
}

inline ddreal& ddreal::operator+=(const ddreal& b) { return *this = *this + b; }
inline ddreal& ddreal::operator-=(const ddreal& b) { return *this = *this - b; }
inline ddreal& ddreal::operator*=(const ddreal& b) { return *this = *this * b; }
inline ddreal& ddreal::operator/=(const ddreal& b) { return *this = *this / b; }

inline bool operator==(const ddreal& a, const ddreal& b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(const ddreal& a, const ddreal& b) { return !(a == b); }
inline bool operator<(const ddreal& a, const ddreal& b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(const ddreal& a, const ddreal& b) { return b < a; }
inline bool operator<=(const ddreal& a, const ddreal& b) { return !(b < a); }
inline bool operator>=(const ddreal& a, const ddreal& b) { return !(a < b); }

inline ddreal abs(const ddreal& a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }
inline ddreal fabs(const ddreal& a) { return abs(a); }

inline ddreal sqrt(const ddreal& a) {
  if (a.hi <= 0.0) return ddreal(a.hi == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN());
  const double x = 1.0 / std::sqrt(a.hi);
  const double ax = a.hi * x;
  const ddreal d = a - dd_detail::two_prod(ax, ax);
  return dd_detail::two_sum(ax, d.hi * (x * 0.5));
}

inline bool isfinite(const ddreal& a) { return std::isfinite(a.hi); }
inline bool isnan(const ddreal& a) { return std::isnan(a.hi); }
inline bool isinf(const ddreal& a) { return std::isinf(a.hi); }

inline ddreal floor(const ddreal& a) {
  const double h = std::floor(a.hi);
  if (h != a.hi) return ddreal(h);
  return dd_detail::quick_two_sum(h, std::floor(a.lo));
}

inline ddreal ldexp(const ddreal& a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

inline ddreal hypot(const ddreal& a, const ddreal& b) {
  const ddreal x = abs(a), y = abs(b);
  const ddreal m = x < y ? y : x;
  if (m.hi == 0.0) return m;
  const ddreal u = x / m, v = y / m;
  return m * sqrt(u * u + v * v);
}

inline std::ostream& operator<<(std::ostream& os, const ddreal& a) { return os << a.hi; }

using ddcplx = std::complex<ddreal>;

inline ddcplx to_dd(std::complex<double> z) { return {ddreal(z.real()), ddreal(z.imag())}; }
inline std::complex<double> to_double(const ddcplx& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace floquet

namespace std {

template <>
class numeric_limits<floquet::ddreal> : public numeric_limits<double> {
 public:
  static constexpr int digits = 106;
  static constexpr int digits10 = 31;
  static floquet::ddreal epsilon() { return {4.93038065763132e-32, 0.0}; }
  static floquet::ddreal min() { return {numeric_limits<double>::min(), 0.0}; }
  static floquet::ddreal max() { return {numeric_limits<double>::max(), 0.0}; }
  static floquet::ddreal lowest() { return {-numeric_limits<double>::max(), 0.0}; }
  static floquet::ddreal infinity() { return {numeric_limits<double>::infinity(), 0.0}; }
  static floquet::ddreal quiet_NaN() { return {numeric_limits<double>::quiet_NaN(), 0.0}; }
};

}  // namespace std

namespace Eigen {

template <>
struct NumTraits<floquet::ddreal> : GenericNumTraits<floquet::ddreal> {
  using Real = floquet::ddreal;
  using NonInteger = floquet::ddreal;
  using Literal = floquet::ddreal;
  using Nested = floquet::ddreal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 20,
    MulCost = 10,
  };
  static inline Real epsilon() { return {4.93038065763132e-32, 0.0}; }
  static inline Real dummy_precision() { return {1e-28, 0.0}; }
  static inline Real highest() { return {std::numeric_limits<double>::max(), 0.0}; }
  static inline Real lowest() { return {-std::numeric_limits<double>::max(), 0.0}; }
  static inline Real infinity() { return {std::numeric_limits<double>::infinity(), 0.0}; }
  static inline Real quiet_NaN() { return {std::numeric_limits<double>::quiet_NaN(), 0.0}; }
  static inline int digits10() { return 31; }
  static inline int digits() { return 106; }
};

}  // namespace Eigen
