#pragma once

#include <string>
#include <vector>

#include "osr/common.h"
#include "osr/matrix_tuple.h"
#include "osr/tensor.h"

namespace osr {

/// Tolerances for the eigenvalue machinery. Both are relative.
struct SpectralOptions {
  /// Eigenvalues closer than cluster_tol * max(1, rho) are merged; the
  /// maximal modulus band is |lambda| >= rho - cluster_tol * rho.
  double cluster_tol = 1e-8;
  /// Singular value cutoff for the numerical ranks used by degeneracy
  /// indices.
  double rank_tol = 1e-10;
};

/// A group of numerically equal eigenvalues.
struct EigenCluster {
  Complex value;  // mean of the members
  int multiplicity = 0;
  std::vector<int> members;  // positions in Spectrum::eigenvalues
};

struct Spectrum {
  std::vector<Complex> eigenvalues;
  std::vector<EigenCluster> clusters;
  double tol = 0.0;  // absolute clustering distance actually used
};

/// All eigenvalues of a square matrix, clustered by single linkage at
/// distance cluster_tol * max(1, rho). Throws DimensionError on non-square
/// input and NumericalError if the solver fails.
Spectrum EigenAll(const ComplexMatrix& m, double cluster_tol = 1e-8);

/// max |lambda| over the eigenvalues of m.
double SpectralRadius(const ComplexMatrix& m);

/// T = sum_i conj(X_i) (x) X_i, tagged with factor size n.
Superoperator BuildT(const MatrixTuple& x);

/// sqrt(rho(T)).
double OuterSpectralRadius(const MatrixTuple& x);

struct MaximalElement {
  Complex value;
  int degeneracy = 1;    // size of the largest Jordan block
  int multiplicity = 1;  // algebraic multiplicity of the cluster
};

/// Eigenvalues of maximal modulus attaining the maximal degeneracy index.
struct MaximalSpectrum {
  double radius = 0.0;
  std::vector<MaximalElement> elements;
  int m_t = 0;
  int degeneracy = 1;
  bool nondegenerate = true;
  /// True for nilpotent input: radius is 0 and the single element is 0.
  bool nilpotent = false;
  /// Distance of the closest element to the ray [0, inf).
  double distance_to_nonnegative_axis = 0.0;
  bool has_nonnegative_real = true;
  std::vector<std::string> warnings;
};

MaximalSpectrum ComputeMaximalSpectrum(const ComplexMatrix& t,
                                       const SpectralOptions& options = {});
MaximalSpectrum ComputeMaximalSpectrum(const Superoperator& t,
                                       const SpectralOptions& options = {});

/// Smallest j >= 1 with rank((m - lambda I)^j) == rank((m - lambda I)^(j+1)).
/// The eigenvalues within tol of lambda are moved to the top of a Schur
/// factorization and the ranks are taken on that block, which differ from
/// the full ranks by the constant n - k. Throws DomainError when no
/// eigenvalue lies within tol of lambda.
int DegeneracyIndex(const ComplexMatrix& m, Complex lambda, double tol,
                    double rank_tol = 1e-10);

/// True when (m / |m|)^dim vanishes to 1e-12, i.e. m is nilpotent up to
/// roundoff. On success writes the nilpotency index to *index if non-null.
bool IsNumericallyNilpotent(const ComplexMatrix& m, int* index = nullptr);

/// sigma_max(V_k)^(1/k) where V_k stacks vec of all d^k words of length k.
/// Throws ResourceError when d^k exceeds budgets.words.
double GelfandSeqWords(const MatrixTuple& x, int k, const Budgets& budgets = {});

/// sigma_max(psi(T^k))^(1/(2k)). Equal to GelfandSeqWords in exact
/// arithmetic since psi(T^k) = V_k V_k^*.
double GelfandSeqPower(const MatrixTuple& x, int k);

}  // namespace osr
