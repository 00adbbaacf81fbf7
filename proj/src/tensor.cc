#include "osr/tensor.h"

#include <climits>
#include <cmath>
#include <string>

namespace osr {

void RequireFinite(const ComplexMatrix& m, std::string_view what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DimensionError(std::string(what) + ": non-finite entry at (" +
                             std::to_string(i) + ", " + std::to_string(j) +
                             ")");
      }
    }
  }
}

void RequireSquare(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

double SpectralNorm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

int NumericalRank(const ComplexMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

long long SaturatingPow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > LLONG_MAX / base) return LLONG_MAX;
    r *= base;
  }
  return r;
}

Superoperator::Superoperator(int factor_dim, ComplexMatrix mat)
    : factor_dim_(factor_dim), mat_(std::move(mat)) {
  const Eigen::Index dim = static_cast<Eigen::Index>(factor_dim) * factor_dim;
  if (factor_dim < 1 || mat_.rows() != dim || mat_.cols() != dim) {
    throw DimensionError("Superoperator: factor_dim " +
                         std::to_string(factor_dim) + " requires a " +
                         std::to_string(dim) + "x" + std::to_string(dim) +
                         " matrix, got " + std::to_string(mat_.rows()) + "x" +
                         std::to_string(mat_.cols()));
  }
  RequireFinite(mat_, "Superoperator");
}

Superoperator Superoperator::Identity(int factor_dim) {
  const int dim = factor_dim * factor_dim;
  return Superoperator(factor_dim, ComplexMatrix::Identity(dim, dim));
}

Superoperator Superoperator::Zero(int factor_dim) {
  const int dim = factor_dim * factor_dim;
  return Superoperator(factor_dim, ComplexMatrix::Zero(dim, dim));
}

ComplexMatrix Kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector Vec(const ComplexMatrix& a) {
  // Eigen storage is column-major, so the raw buffer is already vec(a).
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix Unvec(const ComplexVector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw DimensionError("Unvec: vector of length " + std::to_string(v.size()) +
                         " cannot be reshaped to " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

ComplexMatrix Unvec(const ComplexVector& v, int n) { return Unvec(v, n, n); }

std::vector<int> PsiPermutation(int n) {
  const int dim = n * n;
  std::vector<int> table(static_cast<size_t>(dim) * dim);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const int src = (i + j * n) + (k + l * n) * dim;
          const int dst = (i + k * n) + (j + l * n) * dim;
          table[dst] = src;
        }
      }
    }
  }
  return table;
}

ComplexMatrix Psi(const ComplexMatrix& e, int n) {
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
  if (e.rows() != dim || e.cols() != dim) {
    throw DimensionError("Psi: expected a " + std::to_string(dim) + "x" +
                         std::to_string(dim) + " matrix");
  }
  const std::vector<int> table = PsiPermutation(n);
  ComplexMatrix out(dim, dim);
  const Complex* src = e.data();
  Complex* dst = out.data();
  for (size_t p = 0; p < table.size(); ++p) dst[p] = src[table[p]];
  return out;
}

Superoperator Psi(const Superoperator& e) {
  return Superoperator(e.factor_dim(), Psi(e.mat(), e.factor_dim()));
}

ComplexMatrix PartialTraceQ(const ComplexMatrix& e, int n) {
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
  if (e.rows() != dim || e.cols() != dim) {
    throw DimensionError("PartialTraceQ: expected a " + std::to_string(dim) +
                         "x" + std::to_string(dim) + " matrix");
  }
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    out += e.block(j * n, j * n, n, n);
  }
  return out;
}

ComplexMatrix PartialTraceQ(const Superoperator& e) {
  return PartialTraceQ(e.mat(), e.factor_dim());
}

}  // namespace osr
