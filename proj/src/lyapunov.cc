#include "osr/lyapunov.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "osr/spectral.h"

namespace osr {

namespace {

double TopEigenvalue(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian,
                                                   Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(hermitian.rows() - 1);
}

}  // namespace

PickMatrix ComputePickMatrix(const MatrixTuple& x) {
  const Superoperator t = BuildT(x);
  const double osr = std::sqrt(SpectralRadius(t.mat()));
  if (osr >= 1.0 - 1e-10) {
    throw DomainError("tuple not outer-contractive; rescale first (osr = " +
                      FormatNumber(osr) + ")");
  }
  const int dim = t.dim();
  const ComplexMatrix a = ComplexMatrix::Identity(dim, dim) - t.mat();
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  ComplexMatrix p = Psi(lu.inverse(), x.n());

  const double norm = SpectralNorm(p);
  const double asym = (p - p.adjoint()).norm();
  if (asym > 1e-9 * norm) {
    throw NumericalError("Pick matrix is not Hermitian (asymmetry " +
                         FormatNumber(asym) + ")");
  }
  p = 0.5 * (p + p.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(p, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) < -1e-9 * norm) {
    throw NumericalError("Pick matrix is not positive semidefinite (min eig " +
                         FormatNumber(eig.eigenvalues()(0)) + ")");
  }
  const int rank = NumericalRank(p, 1e-10);
  return {Superoperator(x.n(), std::move(p)), x, rank, rank, lu.rcond()};
}

LyapunovCertificate ComputeLyapunovCertificate(const MatrixTuple& x) {
  const PickMatrix pick = ComputePickMatrix(x);
  ComplexMatrix l = PartialTraceQ(pick.p);
  const double asym = (l - l.adjoint()).norm();
  if (asym > 1e-10 * l.norm()) {
    throw NumericalError("Lyapunov matrix is not Hermitian (asymmetry " +
                         FormatNumber(asym) + ")");
  }
  l = 0.5 * (l + l.adjoint());

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(l);
  const Eigen::VectorXd& w = eig.eigenvalues();
  if (w(0) < 1e-12) {
    throw NumericalError("Lyapunov matrix is not positive definite (min eig " +
                         FormatNumber(w(0)) + ")");
  }
  const ComplexMatrix& u = eig.eigenvectors();

  LyapunovCertificate cert;
  cert.s = u * w.cwiseSqrt().cwiseInverse().asDiagonal() * u.adjoint();
  cert.s_inv = u * w.cwiseSqrt().asDiagonal() * u.adjoint();
  ComplexMatrix r = l - ComplexMatrix::Identity(x.n(), x.n());
  for (const auto& m : x) r -= m * l * m.adjoint();
  cert.residual = r.norm();
  cert.row_norm = RowNorm(x.Conjugated(cert.s, cert.s_inv));
  cert.resolvent_rcond = pick.resolvent_rcond;
  cert.min_eig_l = w(0);
  cert.l = std::move(l);
  return cert;
}

LyapunovCertificate ComputeSimilarityCertificate(const MatrixTuple& x,
                                                 double target) {
  const double osr = OuterSpectralRadius(x);
  if (!(target > osr)) {
    throw DomainError("similarity target " + FormatNumber(target) +
                      " must exceed osr = " + FormatNumber(osr));
  }
  LyapunovCertificate cert = ComputeLyapunovCertificate(x.Scaled(1.0 / target));
  cert.row_norm *= target;
  cert.scale = target;
  return cert;
}

double RowNorm(const MatrixTuple& x) {
  ComplexMatrix g = ComplexMatrix::Zero(x.n(), x.n());
  for (const auto& m : x) g += m * m.adjoint();
  return std::sqrt(std::max(0.0, TopEigenvalue(g)));
}

double ColNorm(const MatrixTuple& x) {
  ComplexMatrix g = ComplexMatrix::Zero(x.n(), x.n());
  for (const auto& m : x) g += m.adjoint() * m;
  return std::sqrt(std::max(0.0, TopEigenvalue(g)));
}

}  // namespace osr
