#pragma once

// Real-space ground truth: piecewise drive protocols on finite chains, the
// Floquet operator as a time-ordered product of matrix exponentials, and
// dense diagonalization.

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "floquet/ddreal.hpp"
#include "floquet/errors.hpp"
#include "floquet/laurent.hpp"
#include "floquet/spectrum.hpp"

namespace floquet {

enum class Boundary { open, periodic };

// A hopping/onsite term near an end of the chain. Cell indices are 0-based
// from the left end when >= 0 and count from the right end when < 0 (-1 is
// the last cell), so the term's support does not depend on L.
struct EdgeTerm {
  int cell_a = 0;
  int orb_a = 0;
  int cell_b = 0;
  int orb_b = 0;
  cplx value;
};

struct DriveSegment {
  double fraction = 1.0;
  LaurentMatrixPoly bulk;
  std::vector<EdgeTerm> edge;
};

struct DriveProtocol {
  std::string model;
  std::map<std::string, double> params;
  int L = 1;
  int q = 1;
  double T = 1.0;
  std::vector<DriveSegment> segments;
  Boundary bc = Boundary::open;

  int dim() const { return L * q; }

  TimedLaurentPoly bulk() const {
    std::vector<TimedLaurentPoly::Segment> segs;
    for (const auto& s : segments) segs.push_back({s.fraction, s.bulk});
    return TimedLaurentPoly(std::move(segs), T);
  }

  // h_F(beta) for protocols whose bulk segments commute.
  LaurentMatrixPoly floquet_bloch() const {
    const TimedLaurentPoly ht = bulk();
    const CommutationReport rep = commutation_check(ht, 8);
    if (!rep.commutes)
      throw ConfigError("floquet_bloch: bulk segments do not commute (residual " + std::to_string(rep.max_residual) +
                        "); h_F is not the time average");
    return time_average(ht);
  }

  Matrix hamiltonian(std::size_t k) const;
  Matrix averaged_hamiltonian() const;
};

// Block-Toeplitz (open) or block-circulant (periodic) real-space matrix of
// h(beta): block (j, j+n) = h_n, matching psi_j = beta^j.
inline Matrix lattice_matrix(const LaurentMatrixPoly& h, int L, Boundary bc) {
  const int q = h.q();
  Matrix H = Matrix::Zero(L * q, L * q);
  for (int n = -h.m(); n <= h.m(); ++n) {
    const Matrix hn = h.coeff(n);
    if (hn.isZero(0.0)) continue;
    for (int j = 0; j < L; ++j) {
      int k = j + n;
      if (bc == Boundary::periodic) {
        k = ((k % L) + L) % L;
      } else if (k < 0 || k >= L) {
        continue;
      }
      H.block(j * q, k * q, q, q) += hn;
    }
  }
  return H;
}

inline void add_edge_terms(Matrix& H, const std::vector<EdgeTerm>& terms, int L, int q) {
  auto cell = [L](int c) { return c >= 0 ? c : L + c; };
  for (const auto& t : terms) {
    const int a = cell(t.cell_a), b = cell(t.cell_b);
    if (a < 0 || a >= L || b < 0 || b >= L) continue;
    H(a * q + t.orb_a, b * q + t.orb_b) += t.value;
  }
}

inline Matrix DriveProtocol::hamiltonian(std::size_t k) const {
  Matrix H = lattice_matrix(segments.at(k).bulk, L, bc);
  add_edge_terms(H, segments.at(k).edge, L, q);
  return H;
}

inline Matrix DriveProtocol::averaged_hamiltonian() const {
  Matrix H = Matrix::Zero(dim(), dim());
  for (std::size_t k = 0; k < segments.size(); ++k) H += segments[k].fraction * hamiltonian(k);
  return H;
}

// Matrix exponential: scaling and squaring with a degree-13 Pade approximant
// (Eigen's MatrixFunctions implementation).
inline Matrix expm(const Matrix& A) {
  if (!A.allFinite()) throw DomainError("expm: non-finite input");
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 > 700.0 * 1024.0) throw DomainError("expm: 1-norm " + std::to_string(norm1) + " overflows");
  Matrix out = A.exp();
  if (!out.allFinite()) throw DomainError("expm: overflow for input with 1-norm " + std::to_string(norm1));
  return out;
}

struct FloquetOperatorResult {
  Matrix U_F;
  Matrix U_ave;
  Matrix deltaU;
};

// U_F = prod_k exp(-i H_k tau_k T), earliest segment rightmost.
inline FloquetOperatorResult floquet_operator(const DriveProtocol& p) {
  const cplx mi(0.0, -1.0);
  FloquetOperatorResult r;
  r.U_F = Matrix::Identity(p.dim(), p.dim());
  for (std::size_t k = 0; k < p.segments.size(); ++k)
    r.U_F = expm(mi * (p.segments[k].fraction * p.T) * p.hamiltonian(k)) * r.U_F;
  if (p.segments.size() == 1) {
    r.U_ave = r.U_F;
  } else {
    r.U_ave = expm(mi * p.T * p.averaged_hamiltonian());
  }
  r.deltaU = r.U_F - r.U_ave;
  return r;
}

// Only U_F, for callers that do not need the averaged comparison.
inline Matrix floquet_unitary(const DriveProtocol& p) {
  const cplx mi(0.0, -1.0);
  Matrix U = Matrix::Identity(p.dim(), p.dim());
  for (std::size_t k = 0; k < p.segments.size(); ++k)
    U = expm(mi * (p.segments[k].fraction * p.T) * p.hamiltonian(k)) * U;
  return U;
}

// Eigenvalues lambda of U mapped to E = i log(lambda) / T in (-pi/T, pi/T].
// With verify set, every eigenpair must satisfy ||U v - lambda v|| <= 1e-10 ||U||.
// Scalar may be cplx or ddcplx; the logarithm is always taken in double.
template <class Scalar>
SpectrumSet quasienergies(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& U, double T,
                          bool verify = false) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using V = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (U.rows() != U.cols()) throw ConfigError("quasienergies: matrix must be square");
  if (!(T > 0.0)) throw ConfigError("quasienergies: T must be positive");
  Eigen::ComplexEigenSolver<M> es(U, verify);
  if (es.info() != Eigen::Success) throw ConditioningError("quasienergies: eigensolver did not converge");
  if (verify) {
    const double unorm = static_cast<double>(U.norm());
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
      const V v = es.eigenvectors().col(i);
      const double res = static_cast<double>((U * v - es.eigenvalues()(i) * v).norm() / v.norm());
      if (res > 1e-10 * unorm) throw ConditioningError("quasienergies: eigenpair residual " + std::to_string(res));
    }
  }
  SpectrumSet s;
  s.period = T;
  s.values.reserve(U.rows());
  const cplx i1(0.0, 1.0);
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    cplx lam;
    if constexpr (std::is_same_v<Scalar, ddcplx>) {
      lam = to_double(es.eigenvalues()(i));
    } else {
      lam = es.eigenvalues()(i);
    }
    if (lam == cplx{}) throw ConditioningError("quasienergies: zero eigenvalue of U");
    s.values.push_back(fold_quasienergy(i1 * std::log(lam) / T, T));
  }
  return s;
}

inline SpectrumSet quasienergies(const Matrix& U, double T, bool verify = false) {
  return quasienergies<cplx>(U, T, verify);
}

// --- extended precision -----------------------------------------------------

using DDMatrix = Eigen::Matrix<ddcplx, Eigen::Dynamic, Eigen::Dynamic>;

enum class Precision { standard, extended };

namespace detail {

struct SparseGenerator {
  int n = 0;
  std::vector<int> ptr, col;
  std::vector<ddcplx> val;
  double norm1 = 0.0;
};

inline SparseGenerator sparse_generator(const Matrix& A, cplx scale) {
  SparseGenerator g;
  g.n = static_cast<int>(A.rows());
  g.ptr.push_back(0);
  std::vector<double> colsum(g.n, 0.0);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (A(i, j) == cplx{}) continue;
      g.col.push_back(j);
      // scale is applied in extended precision so that -i tau T H stays exact
      g.val.push_back(to_dd(A(i, j)) * to_dd(scale));
      colsum[j] += std::abs(A(i, j) * scale);
    }
    g.ptr.push_back(static_cast<int>(g.col.size()));
  }
  for (double c : colsum) g.norm1 = std::max(g.norm1, c);
  return g;
}

inline double inf_norm(const std::vector<ddcplx>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max({m, std::abs(z.real().hi), std::abs(z.imag().hi)});
  return m;
}

// x <- exp(G) x by `steps` Taylor substeps of exp(G / steps).
inline void expmv_inplace(const SparseGenerator& G, int steps, std::vector<ddcplx>& x, std::vector<ddcplx>& v,
                          std::vector<ddcplx>& w) {
  const ddreal h = ddreal(1.0) / ddreal(steps);
  for (int s = 0; s < steps; ++s) {
    v = x;
    int small = 0;
    int k = 1;
    for (; k <= 80; ++k) {
      const ddreal c = h / ddreal(k);
      for (int i = 0; i < G.n; ++i) {
        ddcplx acc{};
        for (int e = G.ptr[i]; e < G.ptr[i + 1]; ++e) acc += G.val[e] * v[G.col[e]];
        w[i] = acc * c;
      }
      std::swap(v, w);
      for (int i = 0; i < G.n; ++i) x[i] += v[i];
      small = inf_norm(v) <= 1e-34 * inf_norm(x) ? small + 1 : 0;
      if (small == 2) break;
    }
    if (k > 80) throw ConditioningError("expmv: Taylor series did not converge");
  }
}

}  // namespace detail

// Similarity D^{-1} H D with D = diag(r^cell): entry (a, b) picks up
// r^(cell_b - cell_a). Exact in arithmetic; with r near the skin-mode decay
// rate it keeps the transformed eigenvectors close to delocalized.
inline Matrix rescale_cells(const Matrix& H, int q, double r) {
  if (r == 1.0) return H;
  Matrix out = H;
  const double lr = std::log(r);
  for (Eigen::Index a = 0; a < H.rows(); ++a)
    for (Eigen::Index b = 0; b < H.cols(); ++b)
      if (H(a, b) != cplx{}) out(a, b) *= std::exp(lr * static_cast<double>(b / q - a / q));
  return out;
}

// Estimates the skin-mode radius from a short open chain in double
// precision: the log-amplitude slope of every Floquet eigenvector over the
// middle half of the chain, returning exp of the midpoint of the slope range.
inline double skin_radius_probe(const DriveProtocol& p, int probe_cells = 40) {
  if (p.bc == Boundary::periodic) return 1.0;
  DriveProtocol small = p;
  small.L = std::min(p.L, probe_cells);
  if (small.L < 12) return 1.0;
  Eigen::ComplexEigenSolver<Matrix> es(floquet_unitary(small), true);
  if (es.info() != Eigen::Success) return 1.0;
  const int q = p.q, L = small.L;
  const int c0 = L / 4, c1 = 3 * L / 4;
  double smin = std::numeric_limits<double>::infinity(), smax = -smin;
  for (Eigen::Index k = 0; k < es.eigenvectors().cols(); ++k) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int c = c0; c < c1; ++c) {
      const double amp = es.eigenvectors().col(k).segment(c * q, q).norm();
      if (!(amp > 0.0)) continue;
      const double y = std::log(amp);
      sx += c;
      sy += y;
      sxx += double(c) * c;
      sxy += c * y;
      ++n;
    }
    if (n < 3) continue;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    smin = std::min(smin, slope);
    smax = std::max(smax, slope);
  }
  if (!(smax >= smin)) return 1.0;
  return std::exp(0.5 * (smin + smax));
}

// U_F in double-double arithmetic, built column by column by Taylor time
// stepping through each segment (no dense products). With r != 1 the
// result is D^{-1} U_F D (see rescale_cells).
inline DDMatrix floquet_unitary_extended(const DriveProtocol& p, double r = 1.0) {
  const int n = p.dim();
  std::vector<detail::SparseGenerator> gens;
  std::vector<int> steps;
  for (std::size_t k = 0; k < p.segments.size(); ++k) {
    gens.push_back(detail::sparse_generator(rescale_cells(p.hamiltonian(k), p.q, r),
                                            cplx(0.0, -p.segments[k].fraction * p.T)));
    if (!std::isfinite(gens.back().norm1)) throw DomainError("expm: non-finite input");
    steps.push_back(std::max(1, static_cast<int>(std::ceil(gens.back().norm1 / 2.0))));
  }
  DDMatrix U(n, n);
  std::vector<ddcplx> x(n), v(n), w(n);
  for (int j = 0; j < n; ++j) {
    std::fill(x.begin(), x.end(), ddcplx{});
    x[j] = ddcplx(ddreal(1.0));
    for (std::size_t k = 0; k < gens.size(); ++k) detail::expmv_inplace(gens[k], steps[k], x, v, w);
    for (int i = 0; i < n; ++i) U(i, j) = x[i];
  }
  return U;
}

struct OracleOptions {
  Precision precision = Precision::extended;
  double radius = 0.0;  // similarity radius for the extended path; 0 = probe
};

// Quasienergies of the protocol's Floquet operator.
inline SpectrumSet oracle_spectrum(const DriveProtocol& p, const OracleOptions& opt = {}) {
  if (opt.precision == Precision::standard) return quasienergies(floquet_unitary(p), p.T);
  const double r = opt.radius > 0.0 ? opt.radius : skin_radius_probe(p);
  return quasienergies<ddcplx>(floquet_unitary_extended(p, r), p.T);
}

// Eigenvalues of h_F(e^{ik}) for k = 2 pi j / kGrid.
inline SpectrumSet pbc_spectrum(const LaurentMatrixPoly& hF, int kGrid) {
  if (kGrid < 2) throw ConfigError("pbc_spectrum: kGrid must be >= 2");
  SpectrumSet s;
  for (int j = 0; j < kGrid; ++j) {
    const Matrix hk = hF(std::polar(1.0, 2.0 * kPi * j / kGrid));
    Eigen::ComplexEigenSolver<Matrix> es(hk, false);
    for (Eigen::Index i = 0; i < hk.rows(); ++i) s.values.push_back(es.eigenvalues()(i));
  }
  return s;
}

}  // namespace floquet
