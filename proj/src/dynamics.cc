#include "osr/dynamics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "osr/schur.h"

namespace osr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void RequireUnitRadius(const ComplexMatrix& t, std::string_view what) {
  const double rho = SpectralRadius(t);
  if (std::abs(rho - 1.0) > 1e-8) {
    throw DomainError(std::string(what) + ": spectral radius " +
                      FormatNumber(rho) +
                      " is not 1; rescale the tuple by 1/osr first");
  }
}

ComplexMatrix NormalizedSpectral(const ComplexMatrix& m) {
  const double s = SpectralNorm(m);
  return s > 0.0 ? ComplexMatrix(m / s) : m;
}

ComplexMatrix NormalizedFrobenius(const ComplexMatrix& m) {
  const double s = m.norm();
  return s > 0.0 ? ComplexMatrix(m / s) : m;
}

// Orthonormal basis (as columns) of span{vec(b_k)}.
ComplexMatrix SpanBasis(const std::vector<ComplexMatrix>& b) {
  const Eigen::Index len = b.front().size();
  ComplexMatrix cols(len, static_cast<Eigen::Index>(b.size()));
  for (size_t k = 0; k < b.size(); ++k) cols.col(k) = Vec(b[k]);
  Eigen::BDCSVD<ComplexMatrix> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-12 * sv(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

double ProjectionResidual(const ComplexMatrix& q, const ComplexVector& v) {
  return (v - q * (q.adjoint() * v)).norm();
}

struct HermitianRoots {
  ComplexMatrix sqrt;
  ComplexMatrix inv_sqrt;
};

HermitianRoots Roots(const Eigen::SelfAdjointEigenSolver<ComplexMatrix>& eig) {
  const ComplexMatrix& u = eig.eigenvectors();
  const Eigen::VectorXd root = eig.eigenvalues().cwiseSqrt();
  return {u * root.asDiagonal() * u.adjoint(),
          u * root.cwiseInverse().asDiagonal() * u.adjoint()};
}

}  // namespace

CpMap MakeCpMap(const MatrixTuple& kraus, double tol) {
  const int n = kraus.n();
  ComplexMatrix row = ComplexMatrix::Zero(n, n);
  ComplexMatrix col = ComplexMatrix::Zero(n, n);
  for (const auto& m : kraus) {
    row += m * m.adjoint();
    col += m.adjoint() * m;
  }
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  return {kraus, BuildT(kraus), (row - id).norm() <= tol,
          (col - id).norm() <= tol};
}

ComplexMatrix ApplyCp(const MatrixTuple& kraus, const ComplexMatrix& h) {
  if (h.rows() != kraus.n() || h.cols() != kraus.n()) {
    throw DimensionError("ApplyCp: expected a " + std::to_string(kraus.n()) +
                         "x" + std::to_string(kraus.n()) + " matrix, got " +
                         std::to_string(h.rows()) + "x" +
                         std::to_string(h.cols()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(h.rows(), h.cols());
  for (const auto& m : kraus) out += m * h * m.adjoint();
  return out;
}

ComplexMatrix ApplyCp(const CpMap& map, const ComplexMatrix& h) {
  return ApplyCp(map.kraus, h);
}

CesaroResult CesaroTHat(const Superoperator& t, int n_terms, double tol) {
  if (n_terms < 1) throw DomainError("CesaroTHat: n_terms must be >= 1");
  RequireUnitRadius(t.mat(), "CesaroTHat");
  constexpr int kMaxSquarings = 24;
  constexpr size_t kMaxStoredOrbit = 256;

  // Burn-in: p is proportional to t^offset with offset = 2^b.
  ComplexMatrix p = NormalizedSpectral(t.mat());
  long long offset = 1;
  for (int b = 0; b < kMaxSquarings; ++b) {
    ComplexMatrix next = NormalizedSpectral(p * p);
    offset *= 2;
    const double change = (next - p).norm();
    p = std::move(next);
    if (change <= 1e-14) break;
  }

  CesaroResult out;
  out.offset = offset;
  ComplexMatrix sum = ComplexMatrix::Zero(t.dim(), t.dim());
  ComplexMatrix term = p;
  double gap = std::numeric_limits<double>::infinity();
  int terms = 0;
  while (terms < n_terms) {
    sum += term;
    if (out.orbit.size() < kMaxStoredOrbit) out.orbit.push_back(term);
    ++terms;
    term = NormalizedSpectral(term * t.mat());
    gap = (term - p).norm();
    if (gap < tol) {
      out.converged = true;
      break;
    }
  }
  if (static_cast<int>(out.orbit.size()) != terms) out.orbit.clear();
  out.terms = terms;
  out.achieved_diff = gap;
  out.t_hat = Superoperator(t.factor_dim(), sum / static_cast<double>(terms));
  return out;
}

SpectralTHatResult SpectralTHat(const Superoperator& t,
                                const DynamicsConfig& config) {
  RequireUnitRadius(t.mat(), "SpectralTHat");
  const MaximalSpectrum ms = ComputeMaximalSpectrum(t, config.spectral);
  const SchurFactors schur = ComputeSchur(t.mat());
  const Eigen::Index dim = t.dim();
  const double abs_tol = config.spectral.cluster_tol * std::max(1.0, ms.radius);

  SpectralTHatResult out;
  out.t_hat = Superoperator::Zero(t.factor_dim());
  std::vector<ComplexMatrix> sectors;
  std::vector<double> args;
  for (const auto& e : ms.elements) {
    std::vector<bool> mask(dim, false);
    for (Eigen::Index i = 0; i < dim; ++i) {
      mask[i] = std::abs(schur.triangular(i, i) - e.value) <=
                abs_tol * std::max(1, e.multiplicity);
    }
    SchurFactors reordered = schur;
    const int k = ReorderSchur(reordered, mask);
    const ComplexMatrix proj = LeadingSpectralProjector(reordered, k);
    ComplexMatrix shifted = t.mat();
    shifted.diagonal().array() -= e.value;
    ComplexMatrix sector = proj;
    for (int j = 1; j < e.degeneracy; ++j) sector = shifted * sector;
    const Complex w = e.value / std::abs(e.value);
    sector *= std::pow(std::conj(w), e.degeneracy - 1);
    sectors.push_back(std::move(sector));
    args.push_back(std::arg(w));
  }

  for (int q = 1; q <= config.q_max && !out.q; ++q) {
    bool all = true;
    for (double a : args) {
      if (std::abs(std::polar(1.0, q * a) - 1.0) > config.phase_tol) {
        all = false;
        break;
      }
    }
    if (all) out.q = q;
  }

  if (out.q) {
    const int q = *out.q;
    std::vector<long long> root(args.size());
    for (size_t a = 0; a < args.size(); ++a) {
      long long r = std::llround(q * args[a] / (2.0 * M_PI));
      root[a] = ((r % q) + q) % q;
    }
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (int r = 0; r < q; ++r) {
      ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
      for (size_t a = 0; a < sectors.size(); ++a) {
        const double phase = 2.0 * M_PI * static_cast<double>((root[a] * r) % q) / q;
        s += std::polar(1.0, phase) * sectors[a];
      }
      s = NormalizedSpectral(s);
      sum += s;
      out.residue_limits.push_back(std::move(s));
    }
    out.t_hat = Superoperator(t.factor_dim(), sum / static_cast<double>(q));
    return out;
  }

  out.warnings.push_back(
      "maximal phases are not roots of unity of order <= " +
      std::to_string(config.q_max) +
      "; spectral T-hat reduced to the positive real sector");
  for (size_t a = 0; a < sectors.size(); ++a) {
    if (std::abs(args[a]) <= config.phase_tol) {
      out.t_hat = Superoperator(t.factor_dim(), NormalizedSpectral(sectors[a]));
      return out;
    }
  }
  out.warnings.push_back("no maximal element on the positive real axis");
  return out;
}

KrausFamily KrausFromSuperoperator(const Superoperator& t, double tol) {
  ComplexMatrix e = Psi(t).mat();
  KrausFamily out;
  const double norm = SpectralNorm(e);
  if (norm == 0.0) return out;
  const double asym = (e - e.adjoint()).norm();
  if (asym > tol * norm) {
    throw DomainError(
        "not a completely positive superoperator (psi(t) asymmetry " +
        FormatNumber(asym / norm) + ")");
  }
  e = 0.5 * (e + e.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(e);
  const Eigen::VectorXd& mu = eig.eigenvalues();
  const Eigen::Index top = mu.size() - 1;
  if (mu(0) < -tol * norm) {
    throw DomainError(
        "not a completely positive superoperator (psi(t) min eigenvalue " +
        FormatNumber(mu(0) / norm) + " relative)");
  }
  const int n = t.factor_dim();
  for (Eigen::Index k = top; k >= 0; --k) {
    if (mu(k) <= tol * mu(top)) break;
    ComplexVector u = eig.eigenvectors().col(k);
    const double peak = u.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (std::abs(u(i)) > 1e-8 * peak) {
        u *= std::conj(u(i)) / std::abs(u(i));
        break;
      }
    }
    out.ops.push_back(std::sqrt(mu(k)) * Unvec(u, n));
    out.weights.push_back(mu(k));
  }
  return out;
}

bool VerifyIdeal(const std::vector<ComplexMatrix>& b, const MatrixTuple& x,
                 double tol) {
  if (b.empty()) throw DomainError("VerifyIdeal: empty family");
  for (const auto& m : b) {
    if (m.rows() != x.n() || m.cols() != x.n()) {
      throw DimensionError("VerifyIdeal: family and tuple sizes differ");
    }
  }
  const ComplexMatrix q = SpanBasis(b);
  for (const auto& xi : x) {
    const double xn = SpectralNorm(xi);
    for (const auto& bk : b) {
      const double scale = xn * bk.norm();
      if (scale == 0.0) continue;
      if (ProjectionResidual(q, Vec(xi * bk)) > tol * scale) return false;
      if (ProjectionResidual(q, Vec(bk * xi)) > tol * scale) return false;
    }
  }
  return true;
}

double SpanResidual(const std::vector<ComplexMatrix>& b,
                    const std::vector<ComplexMatrix>& family) {
  if (b.empty()) throw DomainError("SpanResidual: empty family");
  const ComplexMatrix q = SpanBasis(b);
  double worst = 0.0;
  for (const auto& m : family) {
    const double nv = m.norm();
    if (nv == 0.0) continue;
    worst = std::max(worst, ProjectionResidual(q, Vec(m)) / nv);
  }
  return worst;
}

AlgebraBasis GeneratedAlgebraBasis(const MatrixTuple& x, double tol) {
  const int n = x.n();
  const size_t full = static_cast<size_t>(n) * n;
  std::vector<ComplexVector> basis;
  auto adjoin = [&](const ComplexMatrix& c) {
    if (basis.size() == full) return;
    ComplexVector v = Vec(c);
    const double nv = v.norm();
    if (nv == 0.0) return;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) v -= q * q.dot(v);
    }
    const double nr = v.norm();
    if (nr <= tol * nv) return;
    basis.push_back(v / nr);
  };
  for (const auto& m : x) adjoin(m);
  for (size_t i = 0; i < basis.size(); ++i) {
    const ComplexMatrix b = Unvec(basis[i], n);
    for (const auto& m : x) adjoin(m * b);
  }
  AlgebraBasis out;
  out.dim = static_cast<int>(basis.size());
  for (const auto& v : basis) out.basis.push_back(Unvec(v, n));
  return out;
}

std::string_view ToString(DynamicsClass c) {
  switch (c) {
    case DynamicsClass::kFullAlgebraRank1:
      return "full_algebra_rank1";
    case DynamicsClass::kIdealProper:
      return "ideal_proper";
    case DynamicsClass::kNilpotentLimit:
      return "nilpotent_limit";
  }
  return "unknown";
}

DynamicsReport AnalyzeDynamics(const MatrixTuple& x,
                               const DynamicsConfig& config) {
  const int n = x.n();
  DynamicsReport report;
  report.t_hat = Superoperator::Zero(n);
  const Superoperator t0 = BuildT(x);

  if (IsNumericallyNilpotent(t0.mat())) {
    report.spectrum = ComputeMaximalSpectrum(t0, config.spectral);
    report.classification = DynamicsClass::kNilpotentLimit;
    report.t_hat_square_zero = true;
    report.algebra_dim = GeneratedAlgebraBasis(x).dim;
    const CpMap map = MakeCpMap(x);
    report.unital = map.unital;
    report.trace_preserving = map.trace_preserving;
    report.warnings.push_back(
        "T is nilpotent: normalized powers are undefined and T-hat is "
        "reported as 0");
    return report;
  }

  report.scale = std::sqrt(SpectralRadius(t0.mat()));
  const MatrixTuple xs = x.Scaled(1.0 / report.scale);
  const Superoperator t = BuildT(xs);
  report.spectrum = ComputeMaximalSpectrum(t, config.spectral);
  for (const auto& w : report.spectrum.warnings) report.warnings.push_back(w);

  const CesaroResult ces = CesaroTHat(t, config.n_terms, config.cesaro_tol);
  report.t_hat = ces.t_hat;
  report.cesaro_terms = ces.terms;
  report.cesaro_diff = ces.achieved_diff;
  report.cesaro_converged = ces.converged;
  if (!ces.converged) {
    report.warnings.push_back("Cesaro average did not close its orbit within " +
                              std::to_string(config.n_terms) + " terms");
  }

  const SpectralTHatResult spectral_route = SpectralTHat(t, config);
  for (const auto& w : spectral_route.warnings) report.warnings.push_back(w);
  const ComplexMatrix ces_unit = NormalizedFrobenius(ces.t_hat.mat());
  if (spectral_route.q) {
    const ComplexMatrix spec_unit = NormalizedFrobenius(spectral_route.t_hat.mat());
    report.crosscheck_performed = true;
    report.crosscheck_diff = (ces_unit - spec_unit).norm();
    if (report.crosscheck_diff > config.crosscheck_tol) {
      throw CrossCheckError(
          "Cesaro and spectral T-hat disagree by " +
              FormatNumber(report.crosscheck_diff) +
              " after unit normalization",
          ces_unit, spec_unit);
    }
  } else {
    report.warnings.push_back(
        "Lambda not enumerated (infinite or order > q_max); T-hat "
        "cross-check skipped");
  }

  // Tolerances below the accuracy of T-hat itself would reject the
  // computed values on roundoff.
  const double noise =
      std::max(report.crosscheck_diff,
               static_cast<double>(ces.offset) * kEps * t.dim());
  const double kraus_tol = std::max(config.kraus_tol, 10.0 * noise);
  const double ideal_tol = std::max(config.ideal_tol, 10.0 * noise);

  report.b_family = KrausFromSuperoperator(ces.t_hat, kraus_tol);
  report.ideal_verified = !report.b_family.ops.empty() &&
                          VerifyIdeal(report.b_family.ops, xs, ideal_tol);

  const ComplexMatrix sq = ces_unit * ces_unit;
  const double c = (ces_unit.adjoint() * sq).trace().real();
  report.idempotent_residual = (sq - c * ces_unit).norm();
  report.square_zero_residual = sq.norm();
  report.t_hat_idempotent = report.idempotent_residual <= config.dichotomy_tol &&
                            c > config.dichotomy_tol;
  report.t_hat_square_zero = report.square_zero_residual <= config.dichotomy_tol;
  if (report.t_hat_idempotent == report.t_hat_square_zero) {
    report.warnings.push_back(
        "T-hat is neither idempotent nor square-zero within tolerance");
  }

  report.t_hat_rank = NumericalRank(ces.t_hat.mat(), config.rank_tol);
  report.algebra_dim = GeneratedAlgebraBasis(xs).dim;
  if (report.algebra_dim == n * n) {
    if (report.t_hat_rank != 1) {
      throw NumericalError("tuple generates the full algebra but T-hat has rank " +
                           std::to_string(report.t_hat_rank));
    }
    report.classification = DynamicsClass::kFullAlgebraRank1;
  } else {
    report.classification = DynamicsClass::kIdealProper;
  }

  if (spectral_route.q) {
    LambdaFamily fam;
    fam.q = *spectral_route.q;
    const int q = fam.q;
    if (ces.converged && ces.terms == q &&
        static_cast<int>(ces.orbit.size()) == q) {
      for (int r = 0; r < q; ++r) {
        const long long j = (((r - ces.offset) % q) + q) % q;
        fam.t_lambda.push_back(ces.orbit[j]);
      }
    } else {
      fam.t_lambda = spectral_route.residue_limits;
      report.warnings.push_back(
          "Cesaro orbit length differs from the phase period; T_lambda "
          "taken from the spectral route");
    }
    for (int r = 0; r < q; ++r) {
      const ComplexMatrix& next = fam.t_lambda[(r + 1) % q];
      const double scale = std::max(next.norm(), kEps);
      const double left =
          (NormalizedSpectral(t.mat() * fam.t_lambda[r]) - next).norm() / scale;
      const double right =
          (NormalizedSpectral(fam.t_lambda[r] * t.mat()) - next).norm() / scale;
      fam.shift_residual = std::max({fam.shift_residual, left, right});
      const KrausFamily a =
          KrausFromSuperoperator(Superoperator(n, fam.t_lambda[r]), kraus_tol);
      fam.kraus_counts.push_back(static_cast<int>(a.ops.size()));
      if (!report.b_family.ops.empty()) {
        fam.span_residual =
            std::max(fam.span_residual, SpanResidual(report.b_family.ops, a.ops));
      }
    }
    fam.shift_verified =
        fam.shift_residual <= std::max(config.dichotomy_tol, 10.0 * noise);
    fam.kraus_in_span = !report.b_family.ops.empty() &&
                        fam.span_residual <= std::max(1e-7, 10.0 * ideal_tol);
    if (std::adjacent_find(fam.kraus_counts.begin(), fam.kraus_counts.end(),
                           std::not_equal_to<>()) != fam.kraus_counts.end()) {
      report.warnings.push_back("Kraus counts differ across Lambda");
    }
    report.lambda_finite = std::move(fam);
  }

  if (report.t_hat_rank == 1) {
    Eigen::JacobiSVD<ComplexMatrix> svd(ces.t_hat.mat(),
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
    ComplexMatrix v = Unvec(svd.matrixU().col(0), n);
    ComplexMatrix w = Unvec(svd.matrixV().col(0), n);
    const Complex tr = v.trace();
    if (std::abs(tr) > 0.0) {
      const Complex phase = std::conj(tr) / std::abs(tr);
      v *= phase;
      w *= phase;
    }
    const Complex trv = v.trace();
    const Complex trw = w.trace();
    if (std::abs(trv) > 0.0) report.fixed_state = ComplexMatrix(v / trv);
    if (std::abs(trw) > 0.0) {
      report.dual_fixed_point = ComplexMatrix(w * (static_cast<double>(n) / trw));
    }
  }

  const CpMap map = MakeCpMap(xs);
  report.unital = map.unital;
  report.trace_preserving = map.trace_preserving;
  return report;
}

namespace {

// Checks that m is Hermitian PSD and splits off its square roots; returns
// a failure reason when m is numerically singular.
std::string PositiveRoots(const ComplexMatrix& m, std::string_view name,
                          HermitianRoots* roots) {
  const double norm = m.norm();
  if ((m - m.adjoint()).norm() > 1e-7 * norm) {
    throw NumericalError(std::string(name) + " is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double top = ev(ev.size() - 1);
  if (ev(0) < -1e-7 * top) {
    throw NumericalError(std::string(name) + " is not positive semidefinite");
  }
  if (ev(0) <= 1e-10 * top) {
    return std::string(name) + " is singular (min/max eigenvalue " +
           FormatNumber(ev(0) / top) + ")";
  }
  *roots = Roots(eig);
  return {};
}

}  // namespace

PfConjugation ComputePfConjugation(const MatrixTuple& x,
                                   const DynamicsConfig& config) {
  const DynamicsReport report = AnalyzeDynamics(x, config);
  if (report.t_hat_rank != 1 || !report.fixed_state ||
      !report.dual_fixed_point) {
    throw DomainError("PF conjugation needs T-hat of rank 1, got rank " +
                      std::to_string(report.t_hat_rank));
  }
  const MatrixTuple xs = x.Scaled(1.0 / report.scale);
  const int n = x.n();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);

  PfConjugation out;
  out.scale = report.scale;
  out.v = *report.fixed_state;
  out.w = *report.dual_fixed_point;

  HermitianRoots rv;
  out.co_isometry.failure = PositiveRoots(out.v, "V", &rv);
  if (out.co_isometry.failure.empty()) {
    MatrixTuple y = xs.Conjugated(rv.inv_sqrt, rv.sqrt);
    ComplexMatrix g = -id;
    for (const auto& m : y) g += m * m.adjoint();
    out.co_isometry.residual = g.norm();
    out.co_isometry.tuple = std::move(y);
  }

  HermitianRoots rw;
  out.isometry.failure = PositiveRoots(out.w, "W", &rw);
  if (out.isometry.failure.empty()) {
    MatrixTuple z = xs.Conjugated(rw.sqrt, rw.inv_sqrt);
    ComplexMatrix g = -id;
    for (const auto& m : z) g += m.adjoint() * m;
    out.isometry.residual = g.norm();
    out.isometry.tuple = std::move(z);
  }
  return out;
}

}  // namespace osr
