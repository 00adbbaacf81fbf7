#pragma once

#include <vector>

#include "osr/common.h"

namespace osr {

/// Complex Schur factorization m = unitary * triangular * unitary^*.
struct SchurFactors {
  ComplexMatrix unitary;
  ComplexMatrix triangular;
};

/// Throws DimensionError on non-square input and NumericalError (naming
/// the size) if the QR iteration does not converge.
SchurFactors ComputeSchur(const ComplexMatrix& m);

/// Reorders the factorization in place so that the diagonal positions with
/// selected[p] == true come first, preserving their relative order. Uses
/// adjacent Givens swaps. Returns the number of selected positions.
int ReorderSchur(SchurFactors& schur, const std::vector<bool>& selected);

/// Solves a * x - x * b = c for upper triangular a and b whose spectra are
/// disjoint. Throws NumericalError when a diagonal pair nearly coincides.
ComplexMatrix SolveTriangularSylvester(const ComplexMatrix& a,
                                       const ComplexMatrix& b,
                                       const ComplexMatrix& c);

/// Spectral (Riesz) projector onto the invariant subspace belonging to the
/// leading k diagonal entries of a Schur factorization, along the
/// complementary invariant subspace.
ComplexMatrix LeadingSpectralProjector(const SchurFactors& schur, int k);

}  // namespace osr
