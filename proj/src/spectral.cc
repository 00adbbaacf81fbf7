#include "osr/spectral.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "osr/schur.h"

namespace osr {

namespace {

std::vector<Complex> Eigenvalues(const ComplexMatrix& m) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue iteration did not converge for a " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " matrix");
  }
  const auto& ev = solver.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

std::vector<EigenCluster> Cluster(const std::vector<Complex>& values,
                                  double tol) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= tol) parent[find(i)] = find(j);
    }
  }
  std::vector<EigenCluster> clusters;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    EigenCluster& c = clusters[slot[root]];
    c.members.push_back(i);
    c.value += values[i];
    ++c.multiplicity;
  }
  for (auto& c : clusters) c.value /= static_cast<double>(c.multiplicity);
  return clusters;
}

// Degeneracy index of the eigenvalues at the masked Schur diagonal
// positions. Takes the factorization by value since it reorders it.
int DegeneracyFromSchur(SchurFactors schur, const std::vector<bool>& mask,
                        Complex lambda, double scale, double rank_tol) {
  const int k = ReorderSchur(schur, mask);
  if (k == 1) return 1;
  ComplexMatrix nil = schur.triangular.topLeftCorner(k, k);
  nil.diagonal().array() -= lambda;
  auto rank_of = [&](const ComplexMatrix& p, int power) {
    const double cutoff = rank_tol * std::pow(scale, power);
    Eigen::BDCSVD<ComplexMatrix> svd(p);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cutoff) ++r;
    }
    return r;
  };
  ComplexMatrix power = nil;
  int prev = rank_of(power, 1);
  for (int j = 1; j <= k; ++j) {
    power = power * nil;
    const int next = rank_of(power, j + 1);
    if (next == prev) return j;
    prev = next;
  }
  return k;
}

}  // namespace

Spectrum EigenAll(const ComplexMatrix& m, double cluster_tol) {
  RequireSquare(m, "EigenAll");
  Spectrum s;
  s.eigenvalues = Eigenvalues(m);
  double rho = 0.0;
  for (const Complex& z : s.eigenvalues) rho = std::max(rho, std::abs(z));
  s.tol = cluster_tol * std::max(1.0, rho);
  s.clusters = Cluster(s.eigenvalues, s.tol);
  return s;
}

double SpectralRadius(const ComplexMatrix& m) {
  RequireSquare(m, "SpectralRadius");
  double rho = 0.0;
  for (const Complex& z : Eigenvalues(m)) rho = std::max(rho, std::abs(z));
  return rho;
}

Superoperator BuildT(const MatrixTuple& x) {
  const int n = x.n();
  ComplexMatrix t = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& m : x) t += Kron(m.conjugate(), m);
  return Superoperator(n, std::move(t));
}

double OuterSpectralRadius(const MatrixTuple& x) {
  return std::sqrt(SpectralRadius(BuildT(x).mat()));
}

bool IsNumericallyNilpotent(const ComplexMatrix& m, int* index) {
  RequireSquare(m, "IsNumericallyNilpotent");
  const double norm = m.norm();
  if (norm == 0.0) {
    if (index) *index = 1;
    return true;
  }
  const ComplexMatrix p = m / norm;
  ComplexMatrix power = p;
  const Eigen::Index dim = m.rows();
  for (Eigen::Index j = 1; j <= dim; ++j) {
    if (power.norm() <= 1e-12) {
      if (index) *index = static_cast<int>(j);
      return true;
    }
    power = power * p;
  }
  return false;
}

MaximalSpectrum ComputeMaximalSpectrum(const ComplexMatrix& t,
                                       const SpectralOptions& options) {
  RequireSquare(t, "ComputeMaximalSpectrum");
  MaximalSpectrum out;
  int nil_index = 0;
  if (IsNumericallyNilpotent(t, &nil_index)) {
    out.nilpotent = true;
    out.radius = 0.0;
    out.elements.push_back({Complex(0.0), nil_index,
                            static_cast<int>(t.rows())});
    out.m_t = 1;
    out.degeneracy = nil_index;
    out.nondegenerate = nil_index == 1;
    return out;
  }

  const SchurFactors schur = ComputeSchur(t);
  const Eigen::Index dim = t.rows();
  std::vector<Complex> diag(dim);
  for (Eigen::Index i = 0; i < dim; ++i) diag[i] = schur.triangular(i, i);
  double rho = 0.0;
  for (const Complex& z : diag) rho = std::max(rho, std::abs(z));
  const double abs_tol = options.cluster_tol * std::max(1.0, rho);
  const std::vector<EigenCluster> clusters = Cluster(diag, abs_tol);
  const double scale = std::max(SpectralNorm(t), rho);

  struct Candidate {
    const EigenCluster* cluster;
    int degeneracy;
  };
  std::vector<Candidate> candidates;
  int max_degeneracy = 0;
  for (const auto& c : clusters) {
    if (std::abs(c.value) < rho - options.cluster_tol * rho) continue;
    std::vector<bool> mask(dim, false);
    for (int p : c.members) mask[p] = true;
    const int eta =
        DegeneracyFromSchur(schur, mask, c.value, scale, options.rank_tol);
    candidates.push_back({&c, eta});
    max_degeneracy = std::max(max_degeneracy, eta);
  }

  out.radius = rho;
  out.degeneracy = max_degeneracy;
  out.nondegenerate = max_degeneracy == 1;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cand : candidates) {
    if (cand.degeneracy != max_degeneracy) continue;
    const Complex z = cand.cluster->value;
    out.elements.push_back({z, cand.degeneracy, cand.cluster->multiplicity});
    const double dist = z.real() >= 0.0 ? std::abs(z.imag()) : std::abs(z);
    best = std::min(best, dist);
  }
  // Deterministic order: by argument in [0, 2 pi), nonnegative reals first.
  std::sort(out.elements.begin(), out.elements.end(),
            [](const MaximalElement& a, const MaximalElement& b) {
              auto arg = [](Complex z) {
                double th = std::arg(z);
                if (th < 0.0 && th > -1e-9) th = 0.0;
                return th < 0.0 ? th + 2.0 * M_PI : th;
              };
              return arg(a.value) < arg(b.value);
            });
  out.m_t = static_cast<int>(out.elements.size());
  out.distance_to_nonnegative_axis = best;
  out.has_nonnegative_real = best <= abs_tol;
  if (!out.has_nonnegative_real) {
    out.warnings.push_back(
        "maximal spectrum has no element on the nonnegative real axis "
        "within tolerance (distance " +
        FormatNumber(best) + ")");
  }
  return out;
}

MaximalSpectrum ComputeMaximalSpectrum(const Superoperator& t,
                                       const SpectralOptions& options) {
  return ComputeMaximalSpectrum(t.mat(), options);
}

int DegeneracyIndex(const ComplexMatrix& m, Complex lambda, double tol,
                    double rank_tol) {
  RequireSquare(m, "DegeneracyIndex");
  const SchurFactors schur = ComputeSchur(m);
  const Eigen::Index dim = m.rows();
  std::vector<bool> mask(dim, false);
  bool any = false;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (std::abs(schur.triangular(i, i) - lambda) <= tol) {
      mask[i] = true;
      any = true;
    }
  }
  if (!any) {
    throw DomainError("DegeneracyIndex: no eigenvalue within " +
                      FormatNumber(tol) + " of the requested value");
  }
  const double scale = std::max(SpectralNorm(m), std::abs(lambda));
  return DegeneracyFromSchur(schur, mask, lambda, scale, rank_tol);
}

double GelfandSeqWords(const MatrixTuple& x, int k, const Budgets& budgets) {
  if (k < 1) throw DomainError("GelfandSeqWords: k must be at least 1");
  const long long words = SaturatingPow(x.d(), k);
  if (words > budgets.words) {
    throw ResourceError("GelfandSeqWords: " + std::to_string(x.d()) + "^" +
                        std::to_string(k) + " words exceed the budget of " +
                        std::to_string(budgets.words) +
                        "; use GelfandSeqPower");
  }
  const int n = x.n();
  ComplexMatrix gram = ComplexMatrix::Zero(n * n, n * n);
  // Depth-first over words; prefix products are shared between siblings.
  std::function<void(int, const ComplexMatrix&)> visit =
      [&](int depth, const ComplexMatrix& prefix) {
        if (depth == k) {
          const ComplexVector v = Vec(prefix);
          gram.noalias() += v * v.adjoint();
          return;
        }
        for (const auto& m : x) visit(depth + 1, prefix * m);
      };
  for (const auto& m : x) visit(1, m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const double top = std::max(0.0, eig.eigenvalues()(n * n - 1));
  return std::pow(std::sqrt(top), 1.0 / k);
}

double GelfandSeqPower(const MatrixTuple& x, int k) {
  if (k < 1) throw DomainError("GelfandSeqPower: k must be at least 1");
  const Superoperator t = BuildT(x);
  const double s = t.mat().norm();
  if (s == 0.0) return 0.0;
  const ComplexMatrix base = t.mat() / s;
  const int dim = t.dim();
  ComplexMatrix result = ComplexMatrix::Identity(dim, dim);
  ComplexMatrix sq = base;
  for (int e = k; e > 0; e >>= 1) {
    if (e & 1) result = result * sq;
    if (e > 1) sq = sq * sq;
  }
  const double sigma = SpectralNorm(Psi(result, x.n()));
  return std::sqrt(s) * std::pow(sigma, 1.0 / (2.0 * k));
}

}  // namespace osr
