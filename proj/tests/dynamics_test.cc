#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "osr/dynamics.h"
#include "osr/lyapunov.h"
#include "osr/tensor.h"
#include "test_util.h"

namespace osr {
namespace {

using testing::AmplitudeDamping;
using testing::MatUnit;
using testing::PauliX;
using testing::PauliY;
using testing::PauliZ;
using testing::RandomTuple;
using testing::RelErr;

const double kRootHalf = std::sqrt(0.5);

ComplexMatrix Id(int n) { return ComplexMatrix::Identity(n, n); }

MatrixTuple PauliPair() { return MatrixTuple({kRootHalf * Id(2), kRootHalf * PauliX()}); }

ComplexMatrix Unit(const ComplexMatrix& m) { return m / m.norm(); }

double MinEig(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (h + h.adjoint()),
                                                   Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

TEST(ApplyCpTest, Examples) {
  testing::Rng rng(50);
  const ComplexMatrix h = testing::RandomComplex(rng, 2);
  EXPECT_LT(RelErr(ApplyCp(MatrixTuple({Id(2)}), h), h), 1e-15);

  ComplexMatrix pinched = ComplexMatrix::Zero(2, 2);
  pinched(0, 0) = h(0, 0);
  pinched(1, 1) = h(1, 1);
  EXPECT_LT(RelErr(ApplyCp(MatrixTuple({MatUnit(2, 0, 0), MatUnit(2, 1, 1)}), h),
                   pinched),
            1e-15);
  EXPECT_THROW(ApplyCp(MatrixTuple({Id(2)}), Id(3)), DimensionError);
}

TEST(ApplyCpTest, MatchesSuperoperatorAndPreservesPositivity) {
  testing::Rng rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const auto dims = testing::RandomDims(rng, 4, 3);
    const CpMap map = MakeCpMap(RandomTuple(rng, dims.n, dims.d));
    const ComplexMatrix h = testing::RandomComplex(rng, dims.n);
    const ComplexVector lhs = Vec(ApplyCp(map, h));
    const ComplexVector rhs = map.t.mat() * Vec(h);
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
    const ComplexMatrix psd = testing::RandomPsd(rng, dims.n);
    const ComplexMatrix out = ApplyCp(map, psd);
    EXPECT_GE(MinEig(out), -1e-12 * out.norm());
  }
}

TEST(CpMapTest, Flags) {
  const CpMap damping = MakeCpMap(AmplitudeDamping(0.5));
  EXPECT_TRUE(damping.trace_preserving);
  EXPECT_FALSE(damping.unital);
  const CpMap pauli = MakeCpMap(PauliPair());
  EXPECT_TRUE(pauli.trace_preserving);
  EXPECT_TRUE(pauli.unital);
  EXPECT_EQ(pauli.t.mat(), BuildT(PauliPair()).mat());
}

TEST(CompletePositivityTest, PsiOfTIsPsd) {
  testing::Rng rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const auto dims = testing::RandomDims(rng, 3, 4);
    const MatrixTuple x = RandomTuple(rng, dims.n, dims.d);
    const ComplexMatrix p = Psi(BuildT(x)).mat();
    EXPECT_GE(MinEig(p), -1e-10 * p.norm());
  }
}

TEST(CesaroTest, Examples) {
  const CesaroResult id = CesaroTHat(Superoperator::Identity(2));
  EXPECT_LT((id.t_hat.mat() - Id(4)).norm(), 1e-14);
  EXPECT_TRUE(id.converged);
  EXPECT_EQ(id.terms, 1);

  const Superoperator proj = BuildT(PauliPair());
  EXPECT_LT((proj.mat() * proj.mat() - proj.mat()).norm(), 1e-14);
  const CesaroResult p = CesaroTHat(proj);
  EXPECT_LT(RelErr(p.t_hat.mat(), proj.mat()), 1e-12);

  const Superoperator flip = BuildT(MatrixTuple({PauliX()}));
  const CesaroResult f = CesaroTHat(flip);
  EXPECT_EQ(f.terms, 2);
  EXPECT_TRUE(f.converged);
  const ComplexMatrix expected = 0.5 * (flip.mat() + Id(4));
  EXPECT_LT(RelErr(f.t_hat.mat(), expected), 1e-12);
  EXPECT_LT(RelErr(f.t_hat.mat() * f.t_hat.mat(), f.t_hat.mat()), 1e-12);
}

TEST(CesaroTest, RequiresUnitRadius) {
  EXPECT_THROW(CesaroTHat(BuildT(testing::SwapPair())), DomainError);
}

TEST(SpectralTHatTest, Examples) {
  const SpectralTHatResult id = SpectralTHat(Superoperator::Identity(2));
  EXPECT_LT(RelErr(Unit(id.t_hat.mat()), Unit(Id(4))), 1e-12);
  ASSERT_TRUE(id.q.has_value());
  EXPECT_EQ(*id.q, 1);

  const Superoperator proj = BuildT(PauliPair());
  EXPECT_LT(RelErr(Unit(SpectralTHat(proj).t_hat.mat()), Unit(proj.mat())), 1e-10);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = kRootHalf;
  const Superoperator t = BuildT(MatrixTuple({d}));
  const ComplexMatrix that = SpectralTHat(t).t_hat.mat();
  EXPECT_LT(RelErr(Unit(that), MatUnit(4, 0, 0)), 1e-10);

  const SpectralTHatResult flip = SpectralTHat(BuildT(MatrixTuple({PauliX()})));
  ASSERT_TRUE(flip.q.has_value());
  EXPECT_EQ(*flip.q, 2);
  EXPECT_EQ(flip.residue_limits.size(), 2u);
}

TEST(SpectralTHatTest, AgreesWithCesaro) {
  testing::Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dims = testing::RandomDims(rng, 3, 3);
    const MatrixTuple x = testing::ScaleToOsr(RandomTuple(rng, dims.n, dims.d), 1.0);
    const Superoperator t = BuildT(x);
    const ComplexMatrix c = CesaroTHat(t).t_hat.mat();
    const ComplexMatrix s = SpectralTHat(t).t_hat.mat();
    EXPECT_LT((Unit(c) - Unit(s)).norm(), 1e-6);
  }
}

TEST(KrausTest, SingleGenerator) {
  const KrausFamily f =
      KrausFromSuperoperator(BuildT(MatrixTuple({MatUnit(2, 0, 1)})));
  ASSERT_EQ(f.ops.size(), 1u);
  EXPECT_LT((f.ops[0] - MatUnit(2, 0, 1)).norm(), 1e-14);
  EXPECT_NEAR(f.weights[0], 1.0, 1e-14);

  const KrausFamily id = KrausFromSuperoperator(BuildT(MatrixTuple({Id(2)})));
  ASSERT_EQ(id.ops.size(), 1u);
  EXPECT_LT((id.ops[0] - Id(2)).norm(), 1e-14);
}

TEST(KrausTest, PauliProjection) {
  const KrausFamily f = KrausFromSuperoperator(BuildT(PauliPair()));
  ASSERT_EQ(f.ops.size(), 2u);
  // psi(T) = vec(I) vec(I)^*/2 + vec(X) vec(X)^*/2 has eigenvalues 1, 1.
  EXPECT_NEAR(f.weights[0], 1.0, 1e-14);
  EXPECT_NEAR(f.weights[1], 1.0, 1e-14);
  EXPECT_LT(SpanResidual({Id(2), PauliX()}, f.ops), 1e-12);
  EXPECT_LT(SpanResidual(f.ops, {Id(2), PauliX()}), 1e-12);
}

TEST(KrausTest, ReconstructsAndRejectsNonCp) {
  testing::Rng rng(54);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dims = testing::RandomDims(rng, 3, 3);
    const Superoperator t = BuildT(RandomTuple(rng, dims.n, dims.d));
    const KrausFamily f = KrausFromSuperoperator(t);
    EXPECT_LE(static_cast<int>(f.ops.size()), dims.d);
    EXPECT_LT(RelErr(BuildT(MatrixTuple(f.ops)).mat(), t.mat()), 1e-10);
    for (size_t k = 1; k < f.weights.size(); ++k) {
      EXPECT_GE(f.weights[k - 1], f.weights[k]);
    }
  }
  EXPECT_THROW(KrausFromSuperoperator(Superoperator(2, -BuildT(PauliPair()).mat())),
               DomainError);
}

TEST(VerifyIdealTest, Examples) {
  const std::vector<ComplexMatrix> full = {MatUnit(2, 0, 0), MatUnit(2, 0, 1),
                                           MatUnit(2, 1, 0), MatUnit(2, 1, 1)};
  testing::Rng rng(55);
  EXPECT_TRUE(VerifyIdeal(full, RandomTuple(rng, 2, 3)));
  EXPECT_TRUE(VerifyIdeal({MatUnit(2, 0, 1)}, MatrixTuple({MatUnit(2, 0, 0)})));
  EXPECT_FALSE(VerifyIdeal({MatUnit(2, 0, 0)}, MatrixTuple({MatUnit(2, 0, 1)})));
  EXPECT_THROW(VerifyIdeal({}, MatrixTuple({Id(2)})), DomainError);
}

TEST(AlgebraTest, Examples) {
  EXPECT_EQ(GeneratedAlgebraBasis(MatrixTuple({MatUnit(2, 0, 1), MatUnit(2, 1, 0)})).dim,
            4);
  EXPECT_EQ(GeneratedAlgebraBasis(MatrixTuple({Id(2)})).dim, 1);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  EXPECT_EQ(GeneratedAlgebraBasis(MatrixTuple({d})).dim, 2);
  EXPECT_EQ(GeneratedAlgebraBasis(MatrixTuple({MatUnit(3, 0, 1)})).dim, 1);
  EXPECT_EQ(GeneratedAlgebraBasis(MatrixTuple({MatUnit(3, 0, 1), MatUnit(3, 1, 2)})).dim,
            3);
}

TEST(AlgebraTest, BasisIsOrthonormalAndClosed) {
  testing::Rng rng(56);
  const MatrixTuple x({MatUnit(3, 0, 1) + MatUnit(3, 0, 0), MatUnit(3, 1, 2)});
  const AlgebraBasis a = GeneratedAlgebraBasis(x);
  for (int i = 0; i < a.dim; ++i) {
    for (int j = 0; j < a.dim; ++j) {
      const Complex ip = (a.basis[i].adjoint() * a.basis[j]).trace();
      EXPECT_NEAR(std::abs(ip - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
    }
  }
  EXPECT_TRUE(VerifyIdeal(a.basis, MatrixTuple(a.basis)));
  EXPECT_EQ(GeneratedAlgebraBasis(RandomTuple(rng, 3, 2)).dim, 9);
}

TEST(AnalyzeDynamicsTest, PauliPair) {
  const DynamicsReport r = AnalyzeDynamics(PauliPair());
  EXPECT_EQ(r.classification, DynamicsClass::kIdealProper);
  EXPECT_EQ(r.algebra_dim, 2);
  EXPECT_EQ(r.t_hat_rank, 2);
  EXPECT_TRUE(r.t_hat_idempotent);
  EXPECT_TRUE(r.ideal_verified);
  EXPECT_LT(SpanResidual({Id(2), PauliX()}, r.b_family.ops), 1e-10);
  ASSERT_TRUE(r.lambda_finite.has_value());
  EXPECT_EQ(r.lambda_finite->q, 1);
  EXPECT_TRUE(r.unital);
  EXPECT_TRUE(r.trace_preserving);
}

TEST(AnalyzeDynamicsTest, AmplitudeDamping) {
  const DynamicsReport r = AnalyzeDynamics(AmplitudeDamping(0.5));
  EXPECT_EQ(r.t_hat_rank, 1);
  // diag(1, r) and E12 span only the upper triangular matrices.
  EXPECT_EQ(r.algebra_dim, 3);
  EXPECT_EQ(r.classification, DynamicsClass::kIdealProper);
  EXPECT_TRUE(r.ideal_verified);
  ASSERT_TRUE(r.fixed_state.has_value());
  ASSERT_TRUE(r.dual_fixed_point.has_value());
  EXPECT_LT((*r.fixed_state - MatUnit(2, 0, 0)).norm(), 1e-8);
  EXPECT_LT((*r.dual_fixed_point - Id(2)).norm(), 1e-8);
  const ComplexMatrix expected =
      Vec(MatUnit(2, 0, 0)) * Vec(Id(2)).adjoint();
  EXPECT_LT((Unit(r.t_hat.mat()) - Unit(expected)).norm(), 1e-8);
}

TEST(AnalyzeDynamicsTest, Flip) {
  const DynamicsReport r = AnalyzeDynamics(MatrixTuple({PauliX()}));
  EXPECT_EQ(r.spectrum.m_t, 2);
  ASSERT_TRUE(r.lambda_finite.has_value());
  EXPECT_EQ(r.lambda_finite->q, 2);
  EXPECT_EQ(r.lambda_finite->t_lambda.size(), 2u);
  EXPECT_TRUE(r.lambda_finite->shift_verified);
  EXPECT_TRUE(r.lambda_finite->kraus_in_span);
  EXPECT_TRUE(r.crosscheck_performed);
  EXPECT_TRUE(r.t_hat_idempotent);
}

TEST(AnalyzeDynamicsTest, Nilpotent) {
  const DynamicsReport r = AnalyzeDynamics(MatrixTuple({MatUnit(2, 0, 1)}));
  EXPECT_EQ(r.classification, DynamicsClass::kNilpotentLimit);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(AnalyzeDynamicsTest, DegenerateTupleIsSquareZero) {
  const MatrixTuple x({MatUnit(2, 0, 0), MatUnit(2, 1, 1), MatUnit(2, 0, 1)});
  const DynamicsReport r = AnalyzeDynamics(x);
  EXPECT_EQ(r.spectrum.degeneracy, 2);
  EXPECT_TRUE(r.t_hat_square_zero);
  EXPECT_FALSE(r.t_hat_idempotent);
  EXPECT_TRUE(r.ideal_verified);
  const std::vector<ComplexMatrix>& b = r.b_family.ops;
  std::vector<ComplexMatrix> products;
  for (const auto& bj : b) {
    for (const auto& bk : b) products.push_back(bj * bk);
  }
  double peak = 0.0;
  for (const auto& bj : b) peak = std::max(peak, bj.norm() * bj.norm());
  for (const auto& p : products) EXPECT_LE(p.norm(), 1e-8 * peak);
  const ComplexMatrix s = BuildT(MatrixTuple(b)).mat();
  EXPECT_LE((s * s).norm(), 1e-8 * s.norm() * s.norm());
}

TEST(AnalyzeDynamicsTest, RandomTuplesSatisfyStructure) {
  testing::Rng rng(57);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dims = testing::RandomDims(rng, 3, 3);
    const DynamicsReport r = AnalyzeDynamics(RandomTuple(rng, dims.n, dims.d));
    EXPECT_TRUE(r.ideal_verified);
    EXPECT_NE(r.t_hat_idempotent, r.t_hat_square_zero);
    EXPECT_LE(std::min(r.idempotent_residual, r.square_zero_residual), 1e-6);
    if (r.algebra_dim == dims.n * dims.n) {
      EXPECT_EQ(r.t_hat_rank, 1);
      EXPECT_EQ(r.classification, DynamicsClass::kFullAlgebraRank1);
    }
  }
}

TEST(AnalyzeDynamicsTest, ChannelsAreNondegenerate) {
  testing::Rng rng(58);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dims = testing::RandomDims(rng, 4, 3);
    const MatrixTuple x = testing::RandomTracePreserving(rng, dims.n, dims.d);
    EXPECT_EQ(ComputeMaximalSpectrum(BuildT(x)).degeneracy, 1);
  }
}

TEST(AnalyzeDynamicsTest, FixedStateIsFixed) {
  testing::Rng rng(59);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + trial % 2;
    const MatrixTuple x = testing::RandomTracePreserving(rng, n, 2);
    const DynamicsReport r = AnalyzeDynamics(x);
    ASSERT_TRUE(r.fixed_state.has_value());
    const ComplexMatrix& v = *r.fixed_state;
    EXPECT_LT(RelErr(ApplyCp(x, v), v), 1e-7);
    EXPECT_NEAR(std::abs(v.trace() - Complex(1)), 0.0, 1e-10);
  }
}

// Largest e with Unvec(T-hat vec H) - e tr(H) I >= 0, by bisection.
double DominanceEpsilon(const ComplexMatrix& t_hat, const ComplexMatrix& h) {
  const int n = static_cast<int>(h.rows());
  const ComplexMatrix out = Unvec(t_hat * Vec(h), n);
  const double tr = h.trace().real();
  double lo = 0.0, hi = out.norm() / tr;
  if (MinEig(out) <= 0.0) return 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (MinEig(out - mid * tr * Id(n)) >= -1e-8) lo = mid;
    else hi = mid;
  }
  return lo;
}

TEST(AnalyzeDynamicsTest, FullAlgebraLimitDominatesTrace) {
  testing::Rng rng(60);
  for (int trial = 0; trial < 15; ++trial) {
    const auto dims = testing::RandomDims(rng, 3, 3);
    if (dims.d < 2) continue;
    const MatrixTuple x = RandomTuple(rng, dims.n, dims.d);
    const DynamicsReport r = AnalyzeDynamics(x);
    ASSERT_EQ(r.classification, DynamicsClass::kFullAlgebraRank1);
    const ComplexMatrix t_hat = r.t_hat.mat() / r.t_hat.mat().norm();
    for (int h = 0; h < 5; ++h) {
      const ComplexMatrix psd = testing::RandomPsd(rng, dims.n);
      EXPECT_GT(DominanceEpsilon(t_hat, psd), 0.0);
    }
  }
}

TEST(PfConjugationTest, DepolarizingFamily) {
  const MatrixTuple x({0.5 * Id(2), 0.5 * PauliX(), 0.5 * PauliY(), 0.5 * PauliZ()});
  const PfConjugation pf = ComputePfConjugation(x);
  ASSERT_TRUE(pf.co_isometry.tuple.has_value());
  ASSERT_TRUE(pf.isometry.tuple.has_value());
  EXPECT_LE(pf.co_isometry.residual, 1e-7);
  EXPECT_LE(pf.isometry.residual, 1e-7);
  const CpMap map = MakeCpMap(x);
  EXPECT_TRUE(map.unital);
  EXPECT_TRUE(map.trace_preserving);
  for (int i = 0; i < 4; ++i) {
    EXPECT_LT(((*pf.co_isometry.tuple)[i] - x[i]).norm(), 1e-8);
  }
}

TEST(PfConjugationTest, Scalars) {
  ComplexMatrix a(1, 1), b(1, 1);
  a(0, 0) = 0.6;
  b(0, 0) = Complex(0.0, 0.8);
  const MatrixTuple x({a, b});
  const PfConjugation pf = ComputePfConjugation(x);
  ASSERT_TRUE(pf.co_isometry.tuple.has_value());
  ASSERT_TRUE(pf.isometry.tuple.has_value());
  for (int i = 0; i < 2; ++i) {
    EXPECT_LT(std::abs(((*pf.co_isometry.tuple)[i] - x[i])(0, 0)), 1e-12);
    EXPECT_LT(std::abs(((*pf.isometry.tuple)[i] - x[i])(0, 0)), 1e-12);
  }
}

TEST(PfConjugationTest, AmplitudeDampingBoundary) {
  const PfConjugation pf = ComputePfConjugation(AmplitudeDamping(0.5));
  EXPECT_FALSE(pf.co_isometry.tuple.has_value());
  EXPECT_NE(pf.co_isometry.failure.find("singular"), std::string::npos);
  ASSERT_TRUE(pf.isometry.tuple.has_value());
  EXPECT_LE(pf.isometry.residual, 1e-7);
  const MatrixTuple damping = AmplitudeDamping(0.5);
  for (int i = 0; i < 2; ++i) {
    EXPECT_LT(((*pf.isometry.tuple)[i] - damping[i]).norm(), 1e-7);
  }
}

TEST(PfConjugationTest, RandomFullAlgebra) {
  testing::Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixTuple x = RandomTuple(rng, 2 + trial % 2, 2);
    const PfConjugation pf = ComputePfConjugation(x);
    ASSERT_TRUE(pf.co_isometry.tuple.has_value());
    ASSERT_TRUE(pf.isometry.tuple.has_value());
    EXPECT_LE(pf.co_isometry.residual, 1e-7);
    EXPECT_LE(pf.isometry.residual, 1e-7);
    EXPECT_NEAR(RowNorm(*pf.co_isometry.tuple), 1.0, 1e-7);
    EXPECT_NEAR(ColNorm(*pf.isometry.tuple), 1.0, 1e-7);
  }
}

TEST(PfConjugationTest, RequiresRankOne) {
  EXPECT_THROW(ComputePfConjugation(PauliPair()), DomainError);
}

}  // namespace
}  // namespace osr
