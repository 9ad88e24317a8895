// Static GBZ of the Hatano-Nelson chain against exact diagonalization.
#include <cstdio>

#include "floquet/gbz.hpp"
#include "floquet/lattice.hpp"

using namespace floquet;

int main() {
  const double t = 1.0, g = 0.4;
  const auto h = LaurentMatrixPoly::scalar({{1, t + g}, {-1, t - g}});
  const FloquetGBZ gbz = static_gbz(h);
  double rmin = 1e300, rmax = 0;
  for (const auto& p : gbz.points) {
    rmin = std::min(rmin, std::abs(p.beta));
    rmax = std::max(rmax, std::abs(p.beta));
  }
  std::printf("GBZ: %zu points, |beta| in [%.10f, %.10f], expected %.10f\n", gbz.points.size(), rmin, rmax,
              std::sqrt((t - g) / (t + g)));

  const Matrix H = lattice_matrix(h, 60, Boundary::open);
  Eigen::ComplexEigenSolver<Matrix> es(H, false);
  double maxIm = 0;
  for (int i = 0; i < H.rows(); ++i) maxIm = std::max(maxIm, std::abs(es.eigenvalues()(i).imag()));
  std::printf("OBC L=60: max |Im E| = %.2e (real spectrum)\n", maxIm);
  std::printf("PBC k-loop: E(k=pi/2) = %.3f%+.3fi\n", pbc_spectrum(h, 4).values[1].real(), pbc_spectrum(h, 4).values[1].imag());
}
