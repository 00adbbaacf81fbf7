#pragma once

#include <vector>

#include "osr/common.h"

namespace osr {

/// A tuple (X_1, ..., X_d) of square complex matrices of one common size n.
class MatrixTuple {
 public:
  /// Throws DimensionError if the tuple is empty, a member is not square,
  /// sizes disagree, or an entry is non-finite.
  explicit MatrixTuple(std::vector<ComplexMatrix> mats);

  int n() const { return n_; }
  int d() const { return static_cast<int>(mats_.size()); }

  const ComplexMatrix& operator[](int i) const { return mats_[i]; }
  const std::vector<ComplexMatrix>& mats() const { return mats_; }
  auto begin() const { return mats_.begin(); }
  auto end() const { return mats_.end(); }

  /// (c X_1, ..., c X_d).
  MatrixTuple Scaled(Complex c) const;

  /// (S X_1 S^-1, ..., S X_d S^-1) given S and its inverse.
  MatrixTuple Conjugated(const ComplexMatrix& s,
                         const ComplexMatrix& s_inv) const;

  /// True when every imaginary part is at most tol in magnitude.
  bool IsReal(double tol = 0.0) const;

 private:
  int n_ = 0;
  std::vector<ComplexMatrix> mats_;
};

}  // namespace osr
