#pragma once

#include "osr/common.h"
#include "osr/matrix_tuple.h"
#include "osr/tensor.h"

namespace osr {

/// psi((I - T)^-1) for an outer-contractive tuple.
struct PickMatrix {
  Superoperator p;
  MatrixTuple x;
  int rank = 0;  // singular values above 1e-10 * sigma_max
  /// Same as rank: the dimension of the unital algebra generated by x.
  int algebra_dim = 0;
  /// Reciprocal condition estimate of I - T.
  double resolvent_rcond = 0.0;
};

/// Throws DomainError "tuple not outer-contractive; rescale first" when
/// osr(x) >= 1 - 1e-10 and NumericalError when the result is not
/// Hermitian PSD within 1e-9 * ||P||.
PickMatrix ComputePickMatrix(const MatrixTuple& x);

struct LyapunovCertificate {
  /// Solves L - sum_i X_i L X_i^* = I for the tuple passed in (after the
  /// division by `scale` for similarity certificates).
  ComplexMatrix l;
  double residual = 0.0;  // ||L - sum X_i L X_i^* - I||_F
  ComplexMatrix s;        // L^(-1/2)
  ComplexMatrix s_inv;    // L^(1/2)
  /// ||[S X_1 S^-1 ... S X_d S^-1]||_2 of the original, unscaled tuple.
  double row_norm = 0.0;
  double resolvent_rcond = 0.0;
  double min_eig_l = 0.0;
  double scale = 1.0;
};

/// L = Q(P). Throws like ComputePickMatrix, and NumericalError when L is
/// not Hermitian within 1e-10 relative or its smallest eigenvalue is below
/// 1e-12. L is never regularized.
LyapunovCertificate ComputeLyapunovCertificate(const MatrixTuple& x);

/// Certificate computed for x / target; S then conjugates x itself to a
/// tuple of row norm at most target. Throws DomainError when
/// target <= osr(x).
LyapunovCertificate ComputeSimilarityCertificate(const MatrixTuple& x,
                                                 double target);

/// ||[X_1 ... X_d]||_2 = sqrt(lambda_max(sum X_i X_i^*)).
double RowNorm(const MatrixTuple& x);
/// sqrt(lambda_max(sum X_i^* X_i)).
double ColNorm(const MatrixTuple& x);

}  // namespace osr
