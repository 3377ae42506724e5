#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "orbit/matcore.hpp"
#include "support.hpp"

using namespace orbit;
using orbit::testing::random_complex;
using orbit::testing::random_real;

namespace {

template <typename Scalar>
void expect_svd_invariants(const Matrix<Scalar>& m, const SvdFactors<Scalar>& f) {
  const auto r = std::min(m.rows(), m.cols());
  ASSERT_EQ(f.singular_values.size(), r);
  EXPECT_LE((f.u.adjoint() * f.u - Matrix<Scalar>::Identity(r, r)).norm(), tol::orth);
  EXPECT_LE((f.v.adjoint() * f.v - Matrix<Scalar>::Identity(r, r)).norm(), tol::orth);
  for (Eigen::Index i = 0; i < r; ++i) {
    EXPECT_GE(f.singular_values(i), 0.0);
    if (i > 0) EXPECT_LE(f.singular_values(i), f.singular_values(i - 1));
  }
  const Matrix<Scalar> back = f.u * f.singular_values.asDiagonal() * f.v.adjoint();
  EXPECT_LE((back - m).norm(), 1e-10 * std::max(1.0, m.norm()));
}

}  // namespace

TEST(Svd, Identity) {
  const RealMatrix id = RealMatrix::Identity(3, 3);
  const auto f = svd<double>(id);
  EXPECT_TRUE(f.singular_values.isApprox(RealVector::Ones(3)));
  expect_svd_invariants<double>(id, f);
}

TEST(Svd, DiagonalWithNegativeEntry) {
  RealMatrix m(2, 2);
  m << 3, 0, 0, -4;
  const auto f = svd<double>(m);
  EXPECT_NEAR(f.singular_values(0), 4.0, 1e-14);
  EXPECT_NEAR(f.singular_values(1), 3.0, 1e-14);
}

TEST(Svd, RandomReconstruction) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const RealMatrix m = random_real(rng, 4, 6);
    expect_svd_invariants<double>(m, svd<double>(m));
    const RealMatrix tall = random_real(rng, 6, 3);
    expect_svd_invariants<double>(tall, svd<double>(tall));
    const ComplexMatrix c = random_complex(rng, 3, 5);
    expect_svd_invariants<Complex>(c, svd<Complex>(c));
  }
}

TEST(Svd, RejectsNonFinite) {
  RealMatrix m = RealMatrix::Zero(2, 2);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    svd<double>(m);
    FAIL() << "expected NonFinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(nuclear_norm<double>(m), Error);
}

TEST(NuclearNorm, TrivialCases) {
  EXPECT_NEAR(nuclear_norm<double>(RealMatrix::Identity(5, 5)), 5.0, 1e-13);
  RealMatrix m(2, 2);
  m << 3, 0, 0, -4;
  EXPECT_NEAR(nuclear_norm<double>(m), 7.0, 1e-13);
}

TEST(NuclearNorm, MatchesGramEigenvalueOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const RealMatrix m = random_real(rng, 3, 5);
    // independent route: eigenvalues of M^T M via a separate solver instance
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(m.transpose() * m);
    double oracle = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) oracle += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    EXPECT_NEAR(nuclear_norm<double>(m), oracle, 1e-7 * oracle);
  }
}

TEST(NuclearNorm, ClosedForm2x2) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const RealMatrix m = random_real(rng, 2, 2);
    EXPECT_NEAR(nuclear_norm_2x2(m(0, 0), m(0, 1), m(1, 0), m(1, 1)), nuclear_norm<double>(m), 1e-12);
  }
}

TEST(NuclearNorm, Properties) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const RealMatrix m = random_real(rng, 1 + trial % 5, 1 + (trial / 5) % 5);
    const double nuc = nuclear_norm<double>(m);
    EXPECT_GE(nuc + 1e-12, m.norm());
    if (m.rows() == m.cols()) EXPECT_GE(nuc + 1e-12, std::abs(m.trace()));

    const ComplexMatrix c = random_complex(rng, 3, 3);
    EXPECT_GE(nuclear_norm<Complex>(c) + 1e-12, std::abs(c.trace().real()));
    // PSD Hermitian: nuclear norm is the trace
    const ComplexMatrix p = c * c.adjoint();
    EXPECT_NEAR(nuclear_norm<Complex>(p), p.trace().real(), 1e-10 * p.trace().real());
  }
}

TEST(PsdSqrt, TrivialCases) {
  EXPECT_TRUE(psd_sqrt<double>(RealMatrix::Identity(2, 2)).isApprox(RealMatrix::Identity(2, 2), 1e-14));
  RealMatrix d(2, 2);
  d << 4, 0, 0, 9;
  RealMatrix expected(2, 2);
  expected << 2, 0, 0, 3;
  EXPECT_LE((psd_sqrt<double>(d) - expected).norm(), 1e-14);
  EXPECT_EQ(psd_sqrt<double>(RealMatrix::Zero(3, 3)).norm(), 0.0);
}

TEST(PsdSqrt, SquaresBackToGram) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const RealMatrix g = random_real(rng, 3, 3);
    const RealMatrix b = g.transpose() * g;
    const RealMatrix r = psd_sqrt<double>(b);
    EXPECT_LE((r * r - b).norm(), 1e-10 * b.norm());
    EXPECT_LE(hermitian_defect<double>(r), 1e-14 * r.norm());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(r);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
  }
}

TEST(PsdSqrt, ClampsRoundOffNegatives) {
  RealMatrix b(2, 2);
  b << 1.0, 0.0, 0.0, -1e-12;
  const RealMatrix r = psd_sqrt<double>(b);
  EXPECT_NEAR(r(0, 0), 1.0, 1e-14);
  EXPECT_EQ(r(1, 1), 0.0);
}

TEST(PsdSqrt, Errors) {
  RealMatrix neg(2, 2);
  neg << 1.0, 0.0, 0.0, -0.5;
  try {
    psd_sqrt<double>(neg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPSD);
  }
  RealMatrix asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  try {
    psd_sqrt<double>(asym);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
  // explicit tolerance widens the admitted negative range
  EXPECT_NO_THROW(psd_sqrt<double>(neg, 1.0));
}

TEST(FrobeniusDist, Cases) {
  std::mt19937_64 rng(16);
  const RealMatrix m = random_real(rng, 3, 4);
  EXPECT_EQ(frobenius_dist<double>(m, m), 0.0);
  EXPECT_NEAR(frobenius_dist<double>(RealMatrix::Zero(2, 2), RealMatrix::Identity(2, 2)), std::sqrt(2.0), 1e-15);
  const RealMatrix n = random_real(rng, 3, 4);
  double oracle = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) oracle += (m(r, c) - n(r, c)) * (m(r, c) - n(r, c));
  EXPECT_NEAR(frobenius_dist<double>(m, n), std::sqrt(oracle), 1e-14);
  try {
    frobenius_dist<double>(m, RealMatrix::Zero(4, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}
