#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "osr/common.h"
#include "osr/matrix_tuple.h"

namespace osr {

enum class JsrMethod { kWords, kOsr, kKronLift, kSymLift };

std::string_view ToString(JsrMethod method);

/// Two-sided bound lower <= rho(X_1, ..., X_d) <= upper.
struct JsrBracket {
  double lower = 0.0;
  double upper = 0.0;
  JsrMethod method = JsrMethod::kWords;
  int k = 0;
  /// Set when the bound relies on a guarantee that only holds for real
  /// tuples and the input was complex.
  bool heuristic = false;
};

/// Reference bracket by enumerating every word of length 1..k_max:
/// lower = max rho(X_w)^(1/|w|), upper = min over lengths of
/// max ||X_w||_2^(1/|w|). Throws ResourceError when the total word count
/// exceeds budgets.words.
JsrBracket JsrBracketWords(const MatrixTuple& x, int k_max,
                           const Budgets& budgets = {});

/// [osr / sqrt(d), osr].
JsrBracket JsrBracketOsr(const MatrixTuple& x);

/// (X_1^(x)k, ..., X_d^(x)k). Throws ResourceError when n^k exceeds
/// budgets.kron_dim.
MatrixTuple KronPowerTuple(const MatrixTuple& x, int k,
                           const Budgets& budgets = {});

/// upper = osr(X^(x)k)^(1/k), lower = upper / d^(1/(2k)).
JsrBracket JsrBracketKron(const MatrixTuple& x, int k,
                          const Budgets& budgets = {});

/// Exponent vectors of the degree-k monomials in n variables, in
/// decreasing lexicographic order: e1^k first, en^k last.
class MonomialBasis {
 public:
  MonomialBasis(int n, int k);

  /// C(n + k - 1, n - 1), saturating at LLONG_MAX.
  static long long Dimension(int n, int k);

  int n() const { return n_; }
  int degree() const { return k_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const std::vector<int>& exponent(int index) const {
    return exponents_[index];
  }
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }

  /// Position of an exponent vector, or -1 if it is not in the basis.
  int IndexOf(std::span<const int> exponent) const;

 private:
  int n_;
  int k_;
  std::vector<std::vector<int>> exponents_;
};

/// Matrix of the induced action p(e) -> p(X e) on degree-k homogeneous
/// polynomials, in MonomialBasis order. Column beta holds the coefficients
/// of prod_j (row j of X e)^beta_j.
struct SymLiftOperator {
  int n = 0;
  int k = 0;
  int dim = 0;
  ComplexMatrix mat;
  /// The input had complex entries, for which the bound is not guaranteed.
  bool heuristic = false;
};

/// Throws ResourceError when C(n+k-1, n-1) exceeds budgets.sym_dim.
SymLiftOperator SymLift(const ComplexMatrix& x, int k,
                        const Budgets& budgets = {});
SymLiftOperator SumSymLift(const MatrixTuple& x, int k,
                           const Budgets& budgets = {});

/// upper = rho(SumSymLift(x, 2k))^(1/(2k)), lower = upper / d^(1/(2k)).
JsrBracket JsrBracketSym(const MatrixTuple& x, int k,
                         const Budgets& budgets = {});

/// Permutation operator on (C^n)^(x)k with
/// v_1 (x) ... (x) v_k -> v_sigma(1) (x) ... (x) v_sigma(k) (0-based sigma).
/// Throws DomainError unless sigma is a permutation of 0..k-1.
ComplexMatrix PermutationOperator(int n, std::span<const int> sigma);

/// ||P Y_k - Y_k P||_F / max(||Y_k||_F, tiny) with Y_k = sum_i X_i^(x)k.
double PermCommutationResidual(const MatrixTuple& x, std::span<const int> sigma,
                               const Budgets& budgets = {});

/// True when the relative commutation residual is at most 1e-10.
bool PermCommutationCheck(const MatrixTuple& x, std::span<const int> sigma,
                          const Budgets& budgets = {});

/// Sign s with P v = s v for a top-modulus eigenvector v of Y_k, or 0
/// when P v is not +-v within 1e-6 (for example a degenerate top
/// eigenvalue). Recorded for reports only.
int TopEigenvectorPermutationSign(const MatrixTuple& x,
                                  std::span<const int> sigma,
                                  const Budgets& budgets = {});

}  // namespace osr
