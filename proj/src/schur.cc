#include "osr/schur.h"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace osr {

SchurFactors ComputeSchur(const ComplexMatrix& m) {
  RequireSquare(m, "ComputeSchur");
  if (m.rows() == 0) return {ComplexMatrix(0, 0), ComplexMatrix(0, 0)};
  Eigen::ComplexSchur<ComplexMatrix> schur(m);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("Schur iteration did not converge for a " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " matrix");
  }
  return {schur.matrixU(), schur.matrixT()};
}

namespace {

// Swaps diagonal entries p and p+1 with a single unitary rotation.
void SwapAdjacent(SchurFactors& schur, Eigen::Index p) {
  ComplexMatrix& t = schur.triangular;
  const Complex a = t(p, p);
  const Complex b = t(p, p + 1);
  const Complex c = t(p + 1, p + 1);
  // (b, c - a) is an eigenvector of the 2x2 block for eigenvalue c.
  Complex g1 = b;
  Complex g2 = c - a;
  const double len = std::hypot(std::abs(g1), std::abs(g2));
  Eigen::Matrix2cd g;
  if (len == 0.0) {
    g << 0.0, 1.0, 1.0, 0.0;
  } else {
    g1 /= len;
    g2 /= len;
    g << g1, -std::conj(g2), g2, std::conj(g1);
  }
  t.middleRows(p, 2) = g.adjoint() * t.middleRows(p, 2);
  t.middleCols(p, 2) = t.middleCols(p, 2) * g;
  t(p + 1, p) = 0.0;
  schur.unitary.middleCols(p, 2) = schur.unitary.middleCols(p, 2) * g;
}

}  // namespace

int ReorderSchur(SchurFactors& schur, const std::vector<bool>& selected) {
  const Eigen::Index n = schur.triangular.rows();
  if (static_cast<Eigen::Index>(selected.size()) != n) {
    throw DimensionError("ReorderSchur: selection size mismatch");
  }
  std::vector<bool> sel = selected;
  int placed = 0;
  for (Eigen::Index p = 0; p < n; ++p) {
    if (!sel[p]) continue;
    for (Eigen::Index q = p; q > placed; --q) {
      SwapAdjacent(schur, q - 1);
      std::swap(sel[q], sel[q - 1]);
    }
    ++placed;
  }
  return placed;
}

ComplexMatrix SolveTriangularSylvester(const ComplexMatrix& a,
                                       const ComplexMatrix& b,
                                       const ComplexMatrix& c) {
  const Eigen::Index m = a.rows();
  const Eigen::Index k = b.rows();
  ComplexMatrix x(m, k);
  const double scale =
      std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  for (Eigen::Index j = 0; j < k; ++j) {
    ComplexVector rhs = c.col(j);
    for (Eigen::Index i = 0; i < j; ++i) rhs += x.col(i) * b(i, j);
    ComplexMatrix shifted = a;
    shifted.diagonal().array() -= b(j, j);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::abs(shifted(i, i)) <= 1e-14 * scale) {
        throw NumericalError(
            "Sylvester solve: spectra of the two Schur blocks overlap");
      }
    }
    x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return x;
}

ComplexMatrix LeadingSpectralProjector(const SchurFactors& schur, int k) {
  const Eigen::Index n = schur.triangular.rows();
  ComplexMatrix inner = ComplexMatrix::Zero(n, n);
  inner.topLeftCorner(k, k).setIdentity();
  if (k < n) {
    const ComplexMatrix& t = schur.triangular;
    // Block diagonalize: T11 R - R T22 = -T12.
    const ComplexMatrix r = SolveTriangularSylvester(
        t.topLeftCorner(k, k), t.bottomRightCorner(n - k, n - k),
        -t.topRightCorner(k, n - k));
    inner.topRightCorner(k, n - k) = -r;
  }
  return schur.unitary * inner * schur.unitary.adjoint();
}

}  // namespace osr
