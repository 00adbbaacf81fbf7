#include "osr/matrix_tuple.h"

#include <string>

namespace osr {

MatrixTuple::MatrixTuple(std::vector<ComplexMatrix> mats)
    : mats_(std::move(mats)) {
  if (mats_.empty()) throw DimensionError("MatrixTuple: tuple is empty");
  n_ = static_cast<int>(mats_[0].rows());
  if (n_ < 1) throw DimensionError("MatrixTuple: matrices must be nonempty");
  for (size_t i = 0; i < mats_.size(); ++i) {
    const std::string what = "MatrixTuple member " + std::to_string(i);
    RequireSquare(mats_[i], what);
    if (mats_[i].rows() != n_) {
      throw DimensionError(what + ": size " + std::to_string(mats_[i].rows()) +
                           " differs from " + std::to_string(n_));
    }
    RequireFinite(mats_[i], what);
  }
}

MatrixTuple MatrixTuple::Scaled(Complex c) const {
  std::vector<ComplexMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(c * m);
  return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::Conjugated(const ComplexMatrix& s,
                                    const ComplexMatrix& s_inv) const {
  std::vector<ComplexMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(s * m * s_inv);
  return MatrixTuple(std::move(out));
}

bool MatrixTuple::IsReal(double tol) const {
  for (const auto& m : mats_) {
    if (m.imag().cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace osr
