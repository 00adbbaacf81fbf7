#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "osr/dynamics.h"
#include "osr/lyapunov.h"
#include "osr/spectral.h"
#include "osr/tensor.h"
#include "test_util.h"

namespace osr {
namespace {

using testing::MatUnit;
using testing::RandomTuple;
using testing::RelErr;
using testing::ScaleToOsr;

MatrixTuple Scalar(Complex a) {
  ComplexMatrix m(1, 1);
  m(0, 0) = a;
  return MatrixTuple({m});
}

double MinEig(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

TEST(PickMatrixTest, Scalar) {
  const Complex a(0.3, -0.4);
  const PickMatrix p = ComputePickMatrix(Scalar(a));
  EXPECT_NEAR(std::abs(p.p.mat()(0, 0) - Complex(1.0 / (1.0 - 0.25))), 0.0, 1e-14);
  EXPECT_EQ(p.rank, 1);
  EXPECT_EQ(p.algebra_dim, 1);
}

TEST(PickMatrixTest, NilpotentGenerator) {
  const PickMatrix p = ComputePickMatrix(MatrixTuple({MatUnit(2, 0, 1)}));
  const ComplexVector v = Vec(ComplexMatrix::Identity(2, 2));
  const ComplexMatrix expected = v * v.adjoint() + MatUnit(4, 2, 2);
  EXPECT_LT((p.p.mat() - expected).norm(), 1e-14);
  EXPECT_EQ(p.rank, 2);
}

TEST(PickMatrixTest, HalfIdentity) {
  const PickMatrix p =
      ComputePickMatrix(MatrixTuple({0.5 * ComplexMatrix::Identity(2, 2)}));
  const ComplexVector v = Vec(ComplexMatrix::Identity(2, 2));
  EXPECT_LT((p.p.mat() - (4.0 / 3.0) * v * v.adjoint()).norm(), 1e-14);
  EXPECT_EQ(p.rank, 1);
}

TEST(PickMatrixTest, RankIsUnitalAlgebraDimension) {
  EXPECT_EQ(ComputePickMatrix(MatrixTuple({0.5 * MatUnit(2, 0, 1),
                                           0.5 * MatUnit(2, 1, 0)}))
                .rank,
            4);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = 1.0 / 3.0;
  EXPECT_EQ(ComputePickMatrix(MatrixTuple({d})).rank, 2);
}

TEST(PickMatrixTest, RankMatchesSpanClosureWithUnit) {
  testing::Rng rng(40);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 2;
    std::vector<ComplexMatrix> mats;
    if (trial % 3 == 0) {
      // Upper triangular generators: a proper subalgebra.
      ComplexMatrix a = testing::RandomComplex(rng, n).triangularView<Eigen::Upper>();
      mats.push_back(a);
    } else {
      mats = RandomTuple(rng, n, 1 + trial % 2).mats();
    }
    const MatrixTuple x = ScaleToOsr(MatrixTuple(mats), 0.8);
    std::vector<ComplexMatrix> with_unit = x.mats();
    with_unit.push_back(ComplexMatrix::Identity(n, n));
    const int dim = GeneratedAlgebraBasis(MatrixTuple(with_unit)).dim;
    EXPECT_EQ(ComputePickMatrix(x).rank, dim);
  }
}

TEST(PickMatrixTest, IsHermitianPsd) {
  testing::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dims = testing::RandomDims(rng, 3, 3);
    const MatrixTuple x = ScaleToOsr(RandomTuple(rng, dims.n, dims.d), 0.9);
    const ComplexMatrix p = ComputePickMatrix(x).p.mat();
    EXPECT_LE((p - p.adjoint()).norm(), 1e-12 * p.norm());
    EXPECT_GE(MinEig(p), -1e-9 * p.norm());
  }
}

TEST(PickMatrixTest, RejectsNonContractive) {
  EXPECT_THROW(ComputePickMatrix(MatrixTuple({ComplexMatrix::Identity(2, 2)})),
               DomainError);
  EXPECT_THROW(ComputePickMatrix(testing::SwapPair()), DomainError);
}

TEST(LyapunovTest, Scalar) {
  const Complex a(0.6, 0.0);
  const LyapunovCertificate c = ComputeLyapunovCertificate(Scalar(a));
  EXPECT_NEAR(c.l(0, 0).real(), 1.0 / (1.0 - 0.36), 1e-14);
  EXPECT_NEAR(c.residual, 0.0, 1e-14);
  EXPECT_NEAR(c.s(0, 0).real(), std::sqrt(1.0 - 0.36), 1e-14);
  EXPECT_NEAR(c.row_norm, 0.6, 1e-14);
}

TEST(LyapunovTest, NilpotentGenerator) {
  const LyapunovCertificate c =
      ComputeLyapunovCertificate(MatrixTuple({MatUnit(2, 0, 1)}));
  ComplexMatrix expected = ComplexMatrix::Identity(2, 2);
  expected(0, 0) = 2.0;
  EXPECT_LT((c.l - expected).norm(), 1e-12);
  EXPECT_LE(c.residual, 1e-12);
  EXPECT_NEAR(c.row_norm, std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(c.min_eig_l, 1.0, 1e-12);
}

TEST(LyapunovTest, HalfIdentity) {
  const LyapunovCertificate c =
      ComputeLyapunovCertificate(MatrixTuple({0.5 * ComplexMatrix::Identity(2, 2)}));
  EXPECT_LT((c.l - (4.0 / 3.0) * ComplexMatrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_NEAR(c.residual, 0.0, 1e-14);
  EXPECT_NEAR(c.row_norm, 0.5, 1e-14);
}

TEST(LyapunovTest, RandomContractiveTuples) {
  testing::Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const auto dims = testing::RandomDims(rng, 4, 4);
    const double target = trial % 2 ? 0.95 : 0.99;
    const MatrixTuple x = ScaleToOsr(RandomTuple(rng, dims.n, dims.d), target);
    const LyapunovCertificate c = ComputeLyapunovCertificate(x);
    EXPECT_LE(c.residual, 1e-8 * dims.n);
    EXPECT_GE(c.min_eig_l, 1.0 - 1e-8);
    EXPECT_LT(c.row_norm, 1.0);
    EXPECT_LE((c.l - c.l.adjoint()).norm(), 1e-10 * c.l.norm());
    EXPECT_LT(RelErr(c.s * c.s_inv, ComplexMatrix::Identity(dims.n, dims.n)),
              1e-10);
    const MatrixTuple y = x.Conjugated(c.s, c.s_inv);
    EXPECT_NEAR(OuterSpectralRadius(y) / target, 1.0, 1e-8);
  }
}

TEST(LyapunovTest, ConjugatedGramIsIdentityMinusInverse) {
  testing::Rng rng(43);
  const MatrixTuple x = ScaleToOsr(RandomTuple(rng, 3, 2), 0.9);
  const LyapunovCertificate c = ComputeLyapunovCertificate(x);
  ComplexMatrix g = ComplexMatrix::Zero(3, 3);
  for (const auto& y : x.Conjugated(c.s, c.s_inv)) g += y * y.adjoint();
  EXPECT_LT(RelErr(g, ComplexMatrix::Identity(3, 3) - c.l.inverse()), 1e-10);
}

TEST(SimilarityTest, Examples) {
  const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  const LyapunovCertificate ones =
      ComputeSimilarityCertificate(MatrixTuple({one, one}), 1.5);
  EXPECT_NEAR(ones.row_norm, std::sqrt(2.0), 1e-13);
  EXPECT_EQ(ones.scale, 1.5);

  const LyapunovCertificate e =
      ComputeSimilarityCertificate(MatrixTuple({MatUnit(2, 0, 1)}), 0.1);
  EXPECT_LE(e.row_norm, 0.1);

  testing::Rng rng(44);
  const MatrixTuple x = ScaleToOsr(RandomTuple(rng, 2, 2), 0.9);
  EXPECT_LE(ComputeSimilarityCertificate(x, 0.95).row_norm, 0.95);
}

TEST(SimilarityTest, ApproachesInfimum) {
  testing::Rng rng(45);
  for (int trial = 0; trial < 15; ++trial) {
    const auto dims = testing::RandomDims(rng, 3, 3);
    const MatrixTuple x = RandomTuple(rng, dims.n, dims.d);
    const double osr = OuterSpectralRadius(x);
    for (double eps : {0.1, 0.01}) {
      EXPECT_LE(ComputeSimilarityCertificate(x, osr + eps).row_norm, osr + eps);
    }
  }
}

TEST(SimilarityTest, RejectsTargetAtOrBelowOsr) {
  EXPECT_THROW(ComputeSimilarityCertificate(testing::SwapPair(), 2.0), DomainError);
  EXPECT_THROW(ComputeSimilarityCertificate(testing::SwapPair(), 1.0), DomainError);
}

TEST(RowNormTest, Examples) {
  const ComplexMatrix h = 0.5 * ComplexMatrix::Identity(2, 2);
  EXPECT_NEAR(RowNorm(MatrixTuple({h, h})), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(RowNorm(MatrixTuple({MatUnit(2, 0, 1)})), 1.0, 1e-15);
  EXPECT_NEAR(RowNorm(testing::SwapPair()), 2.0, 1e-14);
  EXPECT_NEAR(ColNorm(MatrixTuple({MatUnit(2, 0, 1)})), 1.0, 1e-15);
  EXPECT_NEAR(ColNorm(testing::AmplitudeDamping(0.5)), 1.0, 1e-14);
}

TEST(RowNormTest, BoundsOsrFromAbove) {
  testing::Rng rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    const auto dims = testing::RandomDims(rng, 4, 4);
    const MatrixTuple x = RandomTuple(rng, dims.n, dims.d);
    EXPECT_LE(OuterSpectralRadius(x), RowNorm(x) * (1 + 1e-12));
  }
}

}  // namespace
}  // namespace osr
