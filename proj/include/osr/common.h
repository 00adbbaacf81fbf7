#pragma once

#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace osr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Base class of every error raised by this library. The CLI maps each
/// subclass onto a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes that do not fit together (non-square input, wrong length, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition does not hold (e.g. the tuple is not
/// outer-contractive when a Pick matrix is requested).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation finished but its result fails a numerical self-check.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A configured size budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Size limits for the enumerations and lifts. Every field is a
/// configuration key; the defaults keep all computations desk scale.
struct Budgets {
  /// Maximum number of words d^k enumerated by the word-based routines.
  long long words = 1'000'000;
  /// Maximum member size n^k of a Kronecker power tuple.
  long long kron_dim = 4096;
  /// Maximum dimension C(n+k-1, n-1) of a symmetric lift.
  long long sym_dim = 5000;
};

/// Throws DimensionError naming `what` if any entry is NaN or infinite.
void RequireFinite(const ComplexMatrix& m, std::string_view what);

/// Throws DimensionError naming `what` unless `m` is square.
void RequireSquare(const ComplexMatrix& m, std::string_view what);

/// Largest singular value.
double SpectralNorm(const ComplexMatrix& m);

/// Number of singular values strictly above rel_tol * sigma_max.
int NumericalRank(const ComplexMatrix& m, double rel_tol);

/// Six significant digits, for messages.
inline std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Integer power base^exp, saturating at LLONG_MAX.
long long SaturatingPow(long long base, int exp);

}  // namespace osr
