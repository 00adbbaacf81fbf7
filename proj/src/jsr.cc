#include "osr/jsr.h"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>

#include "osr/spectral.h"
#include "osr/tensor.h"

namespace osr {

std::string_view ToString(JsrMethod method) {
  switch (method) {
    case JsrMethod::kWords:
      return "words";
    case JsrMethod::kOsr:
      return "osr";
    case JsrMethod::kKronLift:
      return "kron_lift";
    case JsrMethod::kSymLift:
      return "sym_lift";
  }
  return "unknown";
}

JsrBracket JsrBracketWords(const MatrixTuple& x, int k_max,
                           const Budgets& budgets) {
  if (k_max < 1) throw DomainError("JsrBracketWords: k_max must be >= 1");
  long long total = 0;
  for (int k = 1; k <= k_max; ++k) {
    const long long count = SaturatingPow(x.d(), k);
    total = count > LLONG_MAX - total ? LLONG_MAX : total + count;
  }
  if (total > budgets.words) {
    throw ResourceError("JsrBracketWords: " + std::to_string(total) +
                        " words up to length " + std::to_string(k_max) +
                        " exceed the budget of " +
                        std::to_string(budgets.words));
  }
  std::vector<double> max_norm(k_max + 1, 0.0);
  double lower = 0.0;
  std::function<void(int, const ComplexMatrix&)> visit =
      [&](int len, const ComplexMatrix& word) {
        const double rho = SpectralRadius(word);
        lower = std::max(lower, std::pow(rho, 1.0 / len));
        max_norm[len] = std::max(max_norm[len], SpectralNorm(word));
        if (len == k_max) return;
        for (const auto& m : x) visit(len + 1, word * m);
      };
  for (const auto& m : x) visit(1, m);
  double upper = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    upper = std::min(upper, std::pow(max_norm[k], 1.0 / k));
  }
  return {lower, upper, JsrMethod::kWords, k_max, false};
}

JsrBracket JsrBracketOsr(const MatrixTuple& x) {
  const double osr = OuterSpectralRadius(x);
  return {osr / std::sqrt(static_cast<double>(x.d())), osr,
          JsrMethod::kOsr, 1, false};
}

MatrixTuple KronPowerTuple(const MatrixTuple& x, int k,
                           const Budgets& budgets) {
  if (k < 1) throw DomainError("KronPowerTuple: k must be >= 1");
  const long long size = SaturatingPow(x.n(), k);
  if (size > budgets.kron_dim) {
    throw ResourceError("KronPowerTuple: member size " + std::to_string(x.n()) +
                        "^" + std::to_string(k) + " exceeds the budget of " +
                        std::to_string(budgets.kron_dim));
  }
  std::vector<ComplexMatrix> out;
  out.reserve(x.d());
  for (const auto& m : x) {
    ComplexMatrix p = m;
    for (int j = 1; j < k; ++j) p = Kron(p, m);
    out.push_back(std::move(p));
  }
  return MatrixTuple(std::move(out));
}

JsrBracket JsrBracketKron(const MatrixTuple& x, int k, const Budgets& budgets) {
  const MatrixTuple lifted = KronPowerTuple(x, k, budgets);
  const double rho_t = SpectralRadius(BuildT(lifted).mat());
  const double upper = std::pow(rho_t, 1.0 / (2.0 * k));
  const double lower =
      upper / std::pow(static_cast<double>(x.d()), 1.0 / (2.0 * k));
  return {lower, upper, JsrMethod::kKronLift, k, false};
}

long long MonomialBasis::Dimension(int n, int k) {
  // C(n + k - 1, n - 1) computed incrementally; exact while it fits.
  long long r = 1;
  const int choose = std::min(n - 1, k);
  for (int i = 1; i <= choose; ++i) {
    const long long num = static_cast<long long>(n + k - choose) + i - 1;
    if (r > LLONG_MAX / num) return LLONG_MAX;
    r = r * num / i;
  }
  return r;
}

MonomialBasis::MonomialBasis(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 0) throw DomainError("MonomialBasis: need n >= 1, k >= 0");
  std::vector<int> current(n, 0);
  std::function<void(int, int)> fill = [&](int var, int remaining) {
    if (var == n - 1) {
      current[var] = remaining;
      exponents_.push_back(current);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      current[var] = e;
      fill(var + 1, remaining - e);
    }
  };
  fill(0, k);
}

int MonomialBasis::IndexOf(std::span<const int> exponent) const {
  auto it = std::lower_bound(
      exponents_.begin(), exponents_.end(), exponent,
      [](const std::vector<int>& a, std::span<const int> b) {
        // exponents_ is sorted in decreasing lexicographic order.
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(),
                                            a.end());
      });
  if (it == exponents_.end() ||
      !std::equal(it->begin(), it->end(), exponent.begin(), exponent.end())) {
    return -1;
  }
  return static_cast<int>(it - exponents_.begin());
}

namespace {

void RequireSymBudget(int n, int k, const Budgets& budgets) {
  const long long dim = MonomialBasis::Dimension(n, k);
  if (dim > budgets.sym_dim) {
    throw ResourceError("SymLift: dimension C(" + std::to_string(n + k - 1) +
                        ", " + std::to_string(n - 1) + ") = " +
                        std::to_string(dim) + " exceeds the budget of " +
                        std::to_string(budgets.sym_dim));
  }
}

// Adds the matrix of p(e) -> p(X e) into acc.
void AccumulateSymLift(const ComplexMatrix& x, const MonomialBasis& basis,
                       ComplexMatrix& acc) {
  const int n = basis.n();
  using Poly = std::map<std::vector<int>, Complex>;
  for (int col = 0; col < basis.size(); ++col) {
    const std::vector<int>& beta = basis.exponent(col);
    Poly poly{{std::vector<int>(n, 0), Complex(1.0)}};
    for (int j = 0; j < n; ++j) {
      for (int rep = 0; rep < beta[j]; ++rep) {
        Poly next;
        for (const auto& [alpha, c] : poly) {
          for (int m = 0; m < n; ++m) {
            const Complex coef = x(j, m);
            if (coef == Complex(0.0)) continue;
            std::vector<int> a = alpha;
            ++a[m];
            next[a] += c * coef;
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [alpha, c] : poly) {
      acc(basis.IndexOf(alpha), col) += c;
    }
  }
}

}  // namespace

SymLiftOperator SymLift(const ComplexMatrix& x, int k, const Budgets& budgets) {
  RequireSquare(x, "SymLift");
  const int n = static_cast<int>(x.rows());
  RequireSymBudget(n, k, budgets);
  const MonomialBasis basis(n, k);
  SymLiftOperator out;
  out.n = n;
  out.k = k;
  out.dim = basis.size();
  out.mat = ComplexMatrix::Zero(out.dim, out.dim);
  AccumulateSymLift(x, basis, out.mat);
  out.heuristic = x.imag().cwiseAbs().maxCoeff() > 0.0;
  return out;
}

SymLiftOperator SumSymLift(const MatrixTuple& x, int k, const Budgets& budgets) {
  RequireSymBudget(x.n(), k, budgets);
  const MonomialBasis basis(x.n(), k);
  SymLiftOperator out;
  out.n = x.n();
  out.k = k;
  out.dim = basis.size();
  out.mat = ComplexMatrix::Zero(out.dim, out.dim);
  for (const auto& m : x) AccumulateSymLift(m, basis, out.mat);
  out.heuristic = !x.IsReal();
  return out;
}

JsrBracket JsrBracketSym(const MatrixTuple& x, int k, const Budgets& budgets) {
  if (k < 1) throw DomainError("JsrBracketSym: k must be >= 1");
  const SymLiftOperator lift = SumSymLift(x, 2 * k, budgets);
  const double upper = std::pow(SpectralRadius(lift.mat), 1.0 / (2.0 * k));
  const double lower =
      upper / std::pow(static_cast<double>(x.d()), 1.0 / (2.0 * k));
  return {lower, upper, JsrMethod::kSymLift, k, lift.heuristic};
}

ComplexMatrix PermutationOperator(int n, std::span<const int> sigma) {
  const int k = static_cast<int>(sigma.size());
  std::vector<bool> seen(k, false);
  for (int s : sigma) {
    if (s < 0 || s >= k || seen[s]) {
      throw DomainError("PermutationOperator: sigma is not a permutation");
    }
    seen[s] = true;
  }
  const long long dim = SaturatingPow(n, k);
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  std::vector<int> digits(k), moved(k);
  for (long long src = 0; src < dim; ++src) {
    long long rem = src;
    for (int pos = k - 1; pos >= 0; --pos) {
      digits[pos] = static_cast<int>(rem % n);
      rem /= n;
    }
    for (int pos = 0; pos < k; ++pos) moved[pos] = digits[sigma[pos]];
    long long dst = 0;
    for (int pos = 0; pos < k; ++pos) dst = dst * n + moved[pos];
    p(dst, src) = 1.0;
  }
  return p;
}

namespace {

ComplexMatrix SumKronPower(const MatrixTuple& x, int k, const Budgets& budgets) {
  const MatrixTuple lifted = KronPowerTuple(x, k, budgets);
  ComplexMatrix y = ComplexMatrix::Zero(lifted.n(), lifted.n());
  for (const auto& m : lifted) y += m;
  return y;
}

}  // namespace

double PermCommutationResidual(const MatrixTuple& x, std::span<const int> sigma,
                               const Budgets& budgets) {
  const int k = static_cast<int>(sigma.size());
  const ComplexMatrix y = SumKronPower(x, k, budgets);
  const ComplexMatrix p = PermutationOperator(x.n(), sigma);
  const double scale = std::max(y.norm(), std::numeric_limits<double>::min());
  return (p * y - y * p).norm() / scale;
}

bool PermCommutationCheck(const MatrixTuple& x, std::span<const int> sigma,
                          const Budgets& budgets) {
  return PermCommutationResidual(x, sigma, budgets) <= 1e-10;
}

int TopEigenvectorPermutationSign(const MatrixTuple& x,
                                  std::span<const int> sigma,
                                  const Budgets& budgets) {
  const int k = static_cast<int>(sigma.size());
  const ComplexMatrix y = SumKronPower(x, k, budgets);
  const ComplexMatrix p = PermutationOperator(x.n(), sigma);
  Eigen::ComplexEigenSolver<ComplexMatrix> eig(y);
  if (eig.info() != Eigen::Success) return 0;
  Eigen::Index top = 0;
  eig.eigenvalues().cwiseAbs().maxCoeff(&top);
  const ComplexVector v = eig.eigenvectors().col(top).normalized();
  const ComplexVector pv = p * v;
  if ((pv - v).norm() <= 1e-6) return 1;
  if ((pv + v).norm() <= 1e-6) return -1;
  return 0;
}

}  // namespace osr
