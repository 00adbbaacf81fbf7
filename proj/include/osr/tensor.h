#pragma once

#include <vector>

#include "osr/common.h"

namespace osr {

/// An n^2 x n^2 matrix together with its Kronecker factor size n. Row and
/// column indices are read as i + j*n (0-based), the same layout that Vec
/// uses for an n x n matrix.
class Superoperator {
 public:
  /// Throws DimensionError unless mat is factor_dim^2 square, and if any
  /// entry is non-finite.
  Superoperator(int factor_dim, ComplexMatrix mat);

  static Superoperator Identity(int factor_dim);
  static Superoperator Zero(int factor_dim);

  int factor_dim() const { return factor_dim_; }
  int dim() const { return factor_dim_ * factor_dim_; }
  const ComplexMatrix& mat() const { return mat_; }

 private:
  int factor_dim_;
  ComplexMatrix mat_;
};

/// Standard Kronecker product: block (i, j) of the result is a(i, j) * b.
ComplexMatrix Kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column stacking. Entry (i, j) lands at coordinate i + j * rows.
ComplexVector Vec(const ComplexMatrix& a);

/// Inverse of Vec for a rows x cols matrix.
ComplexMatrix Unvec(const ComplexVector& v, int rows, int cols);

/// Inverse of Vec for an n x n matrix. Throws DimensionError unless
/// v.size() == n * n.
ComplexMatrix Unvec(const ComplexVector& v, int n);

/// Index table of the psi involution for factor size n. Entry p of the
/// table is the column-major linear index of the source entry that psi
/// moves to destination p. The table is its own inverse.
std::vector<int> PsiPermutation(int n);

/// The psi involution: the entry at (i + j n, k + l n) moves to
/// (i + k n, j + l n). It is a pure entry permutation, so Psi(Psi(e)) == e
/// bit for bit.
Superoperator Psi(const Superoperator& e);
ComplexMatrix Psi(const ComplexMatrix& e, int n);

/// Partial trace Q: maps the basis element at (i + j n, k + l n) to
/// delta(j, l) E(i, k). Satisfies Q(vec(A) vec(B)^*) = A B^*.
ComplexMatrix PartialTraceQ(const Superoperator& e);
ComplexMatrix PartialTraceQ(const ComplexMatrix& e, int n);

}  // namespace osr
