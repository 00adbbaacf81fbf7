#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osr/common.h"
#include "osr/matrix_tuple.h"
#include "osr/spectral.h"
#include "osr/tensor.h"

namespace osr {

/// The completely positive map H -> sum_i X_i H X_i^*.
struct CpMap {
  MatrixTuple kraus;
  Superoperator t;
  bool unital = false;            // sum X_i X_i^* = I within 1e-8
  bool trace_preserving = false;  // sum X_i^* X_i = I within 1e-8
};

CpMap MakeCpMap(const MatrixTuple& kraus, double tol = 1e-8);

/// Throws DimensionError unless h is n x n.
ComplexMatrix ApplyCp(const CpMap& map, const ComplexMatrix& h);
ComplexMatrix ApplyCp(const MatrixTuple& kraus, const ComplexMatrix& h);

struct CesaroResult {
  Superoperator t_hat = Superoperator::Zero(1);
  /// Number of averaged terms.
  int terms = 0;
  /// Frobenius gap between the first averaged term and the term after the
  /// window; below tol the window is a full period of the orbit.
  double achieved_diff = 0.0;
  bool converged = false;
  /// The averaged terms, each of unit spectral norm. orbit[j] is
  /// proportional to t^(offset + j).
  std::vector<ComplexMatrix> orbit;
  long long offset = 0;
};

/// Average of t^m / ||t^m||_2 over the tail of the orbit. The powers are
/// first advanced to m = 2^b by normalized repeated squaring, which leaves
/// the limit unchanged, and then averaged until the orbit returns to its
/// starting point within tol or n_terms terms have been used. Requires
/// rho(t) = 1 within 1e-8 (DomainError otherwise).
CesaroResult CesaroTHat(const Superoperator& t, int n_terms = 4096,
                        double tol = 1e-9);

struct DynamicsConfig {
  int n_terms = 4096;
  double cesaro_tol = 1e-9;
  int q_max = 24;
  double phase_tol = 1e-6;
  double kraus_tol = 1e-10;
  double ideal_tol = 1e-8;
  double dichotomy_tol = 1e-6;
  double crosscheck_tol = 1e-5;
  double rank_tol = 1e-8;
  SpectralOptions spectral;
};

struct SpectralTHatResult {
  Superoperator t_hat = Superoperator::Zero(1);
  /// Set when every maximal phase is a q-th root of unity, q <= q_max.
  std::optional<int> q;
  /// Limits of t^m / ||t^m||_2 along m = r mod q, r = 0..q-1.
  std::vector<ComplexMatrix> residue_limits;
  std::vector<std::string> warnings;
};

/// T-hat from the Jordan structure: each maximal element lambda of
/// degeneracy eta contributes conj(w)^(eta-1) (T - lambda)^(eta-1) P_lambda
/// with w = lambda / |lambda| and P_lambda its spectral projector; the phase
/// sectors are then averaged exactly over one period. Without a finite
/// period only the sector at the positive real axis is returned and a
/// warning is attached. Requires rho(t) = 1 within 1e-8.
SpectralTHatResult SpectralTHat(const Superoperator& t,
                                const DynamicsConfig& config = {});

struct KrausFamily {
  std::vector<ComplexMatrix> ops;
  /// ||B_k||_F^2, descending.
  std::vector<double> weights;
};

/// B_k = sqrt(mu_k) unvec(u_k) over the eigenpairs of psi(t) with
/// mu_k > tol * mu_max. The first entry of vec(B_k) above roundoff is made
/// real positive. Throws DomainError "not a completely positive
/// superoperator" when psi(t) is not Hermitian PSD within tol * ||psi(t)||.
KrausFamily KrausFromSuperoperator(const Superoperator& t, double tol = 1e-10);

/// True iff every X_i B_k and B_k X_i lies in span{B_k}, measured by the
/// projection residual relative to ||X_i||_2 ||B_k||_F. Throws DomainError
/// on an empty family.
bool VerifyIdeal(const std::vector<ComplexMatrix>& b, const MatrixTuple& x,
                 double tol = 1e-8);

/// Largest relative distance of a member of `family` from span(b).
double SpanResidual(const std::vector<ComplexMatrix>& b,
                    const std::vector<ComplexMatrix>& family);

struct AlgebraBasis {
  std::vector<ComplexMatrix> basis;  // orthonormal in the Frobenius product
  int dim = 0;
};

/// Basis of the (non-unital) algebra generated by x: span of all nonempty
/// words, obtained by closing span{X_i} under left multiplication.
AlgebraBasis GeneratedAlgebraBasis(const MatrixTuple& x, double tol = 1e-9);

enum class DynamicsClass { kFullAlgebraRank1, kIdealProper, kNilpotentLimit };

std::string_view ToString(DynamicsClass c);

struct LambdaFamily {
  int q = 1;
  /// t_lambda[r] belongs to lambda = exp(2 pi i r / q).
  std::vector<ComplexMatrix> t_lambda;
  std::vector<int> kraus_counts;
  /// max over r of the relative gap between the normalized products
  /// T T_r, T_r T and T_(r+1).
  double shift_residual = 0.0;
  bool shift_verified = false;
  double span_residual = 0.0;
  bool kraus_in_span = false;
};

struct DynamicsReport {
  /// osr of the input; the analysis runs on x / scale.
  double scale = 0.0;
  MaximalSpectrum spectrum;
  Superoperator t_hat = Superoperator::Zero(1);  // Cesaro route
  int cesaro_terms = 0;
  double cesaro_diff = 0.0;
  bool cesaro_converged = false;
  bool crosscheck_performed = false;
  double crosscheck_diff = 0.0;
  bool t_hat_idempotent = false;
  bool t_hat_square_zero = false;
  double idempotent_residual = 0.0;  // ||N^2 - c N||_F, N = T-hat / ||T-hat||_F
  double square_zero_residual = 0.0;  // ||N^2||_F
  KrausFamily b_family;
  bool ideal_verified = false;
  int t_hat_rank = 0;
  int algebra_dim = 0;
  DynamicsClass classification = DynamicsClass::kIdealProper;
  std::optional<LambdaFamily> lambda_finite;
  /// Rank-one case T-hat = vec(V) vec(W)^*: V / tr V and W normalized to
  /// trace n.
  std::optional<ComplexMatrix> fixed_state;
  std::optional<ComplexMatrix> dual_fixed_point;
  bool unital = false;
  bool trace_preserving = false;
  std::vector<std::string> warnings;
};

/// Raised when the two routes to T-hat disagree.
class CrossCheckError : public NumericalError {
 public:
  CrossCheckError(const std::string& what, ComplexMatrix cesaro,
                  ComplexMatrix spectral)
      : NumericalError(what),
        cesaro_(std::move(cesaro)),
        spectral_(std::move(spectral)) {}
  const ComplexMatrix& cesaro() const { return cesaro_; }
  const ComplexMatrix& spectral() const { return spectral_; }

 private:
  ComplexMatrix cesaro_;
  ComplexMatrix spectral_;
};

DynamicsReport AnalyzeDynamics(const MatrixTuple& x,
                               const DynamicsConfig& config = {});

struct PfDirection {
  std::optional<MatrixTuple> tuple;
  /// ||sum Y Y^* - I||_F for the co-isometry, ||sum Z^* Z - I||_F for the
  /// isometry.
  double residual = 0.0;
  std::string failure;
};

struct PfConjugation {
  double scale = 0.0;
  ComplexMatrix v;  // fixed state
  ComplexMatrix w;  // dual fixed point
  /// V^(-1/2) X_i V^(1/2) on x / scale.
  PfDirection co_isometry;
  /// W^(1/2) X_i W^(-1/2) on x / scale.
  PfDirection isometry;
};

/// Requires T-hat of rank one (DomainError otherwise). A direction whose
/// matrix has smallest eigenvalue at most 1e-10 of its largest is reported
/// as failed, with the reason in `failure`; NumericalError when V or W is
/// not Hermitian PSD.
PfConjugation ComputePfConjugation(const MatrixTuple& x,
                                   const DynamicsConfig& config = {});

}  // namespace osr
