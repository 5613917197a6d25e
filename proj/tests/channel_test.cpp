#include "hybridbf/channel.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "hybridbf/error.hpp"
#include "test_util.hpp"

namespace hybridbf::channel {
namespace {

using testing::expect_error;

TEST(CorrelationMatrix, UncorrelatedIsIdentity) {
  EXPECT_TRUE(correlation_matrix({0.0, 3}) == CMat::Identity(3, 3));
}

TEST(CorrelationMatrix, SquaredDistanceExponent) {
  const CMat r = correlation_matrix({0.8, 3});
  CMat want(3, 3);
  want << 1, 0.8, 0.4096, 0.8, 1, 0.8, 0.4096, 0.8, 1;
  EXPECT_LT((r - want).cwiseAbs().maxCoeff(), 1e-15);

  const CMat r2 = correlation_matrix({0.5, 2});
  EXPECT_EQ(r2(0, 1), cplx(0.5, 0));
  EXPECT_EQ(r2(1, 1), cplx(1, 0));
}

TEST(CorrelationMatrix, SymmetricToeplitzUnitDiagonalPsd) {
  for (double alpha : {0.0, 0.3, 0.7, 0.9, 0.99}) {
    for (int n : {1, 2, 5, 16, 64}) {
      const CMat r = correlation_matrix({alpha, n});
      EXPECT_TRUE(r == r.transpose());
      for (int i = 0; i < n; ++i) {
        EXPECT_EQ(r(i, i), cplx(1, 0));
        for (int j = 0; j + 1 < n && i + 1 < n; ++j) EXPECT_EQ(r(i, j), r(i + 1, j + 1));
      }
      const auto evd = linalg::hermitian_evd(r);
      EXPECT_GE(evd.eigenvalues.minCoeff(), -1e-10) << "alpha " << alpha << " n " << n;
    }
  }
}

TEST(CorrelationProfile, RejectsOutOfRange) {
  expect_error(ErrorCode::kDomainError, [] { CorrelationProfile(1.0, 4); });
  expect_error(ErrorCode::kDomainError, [] { CorrelationProfile(-0.1, 4); });
  expect_error(ErrorCode::kDomainError, [] { CorrelationProfile(0.5, 0); });
  EXPECT_NO_THROW(CorrelationProfile(1.0 - 1e-12, 2));
}

TEST(SampleIid, VarianceIsOneOverNr) {
  constexpr int kNr = 16;
  constexpr int kCols = 6250;  // 1e5 entries
  RandomStream stream(42, 0);
  const CMat g = sample_iid(kNr, kCols, stream);
  const double n = static_cast<double>(g.size());
  const double mean_power = g.cwiseAbs2().sum() / n;
  // |g|^2 is exponential with mean 1/16, so its std is also 1/16.
  const double se = (1.0 / kNr) / std::sqrt(n);
  EXPECT_NEAR(mean_power, 1.0 / kNr, 3 * se);
}

TEST(SampleIid, ZeroMean) {
  constexpr int kNr = 16;
  RandomStream stream(7, 3);
  const CMat g = sample_iid(kNr, 6250, stream);
  const double n = static_cast<double>(g.size());
  const cplx mean = g.sum() / n;
  const double se = std::sqrt(0.5 / kNr) / std::sqrt(n);
  EXPECT_NEAR(mean.real(), 0.0, 3 * se);
  EXPECT_NEAR(mean.imag(), 0.0, 3 * se);
}

TEST(SampleIid, DeterministicPerSubstream) {
  RandomStream a(123, 5), b(123, 5), c(123, 6), d(123, 5, StreamPurpose::kDftColumns);
  const CMat ga = sample_iid(4, 3, a);
  EXPECT_TRUE(ga == sample_iid(4, 3, b));
  EXPECT_FALSE(ga == sample_iid(4, 3, c));
  EXPECT_FALSE(ga == sample_iid(4, 3, d));
}

TEST(SampleIid, RejectsEmptyShape) {
  RandomStream s(1, 0);
  expect_error(ErrorCode::kDomainError, [&] { sample_iid(0, 2, s); });
}

TEST(KroneckerChannel, IdentityCorrelationIsBitIdentical) {
  RandomStream s(9, 0);
  const CMat g = sample_iid(6, 4, s);
  const ChannelRealization h =
      kronecker_channel(CMat::Identity(6, 6), CMat::Identity(4, 4), g);
  EXPECT_TRUE(h.h == g);
  EXPECT_EQ(h.n_r, 6);
  EXPECT_EQ(h.n_t, 4);
}

TEST(KroneckerChannel, NearPerfectTransmitCorrelation) {
  RandomStream s(10, 0);
  const CMat g = sample_iid(32, 2, s);
  const CMat r_t = correlation_matrix({1.0 - 1e-12, 2});
  const CMat h = kronecker_channel(CMat::Identity(32, 32), r_t, g).h;
  EXPECT_LT((h.col(0) - h.col(1)).norm() / h.col(0).norm(), 1e-3);
}

TEST(KroneckerChannel, DimensionMismatch) {
  RandomStream s(1, 0);
  const CMat g = sample_iid(3, 2, s);
  expect_error(ErrorCode::kDimensionMismatch,
               [&] { kronecker_channel(CMat::Identity(2, 2), CMat::Identity(2, 2), g); });
}

TEST(KroneckerChannel, CovarianceMatchesKroneckerProduct) {
  // Monte Carlo oracle: Cov(vec H) = (R_t^T kron R_r) / N_r.
  constexpr int kN = 4;
  constexpr int kDraws = 10000;
  const CMat r_r = correlation_matrix({0.5, kN});
  const CMat r_t = correlation_matrix({0.7, kN});
  const CMat sr = linalg::principal_sqrt(r_r);
  const CMat st = linalg::principal_sqrt(r_t);

  CMat cov = CMat::Zero(kN * kN, kN * kN);
  for (int t = 0; t < kDraws; ++t) {
    RandomStream s(2024, t);
    const CMat h = apply_kronecker(sr, st, sample_iid(kN, kN, s));
    const CVec v = h.reshaped();  // column-major vec
    cov += v * v.adjoint();
  }
  cov /= kDraws;

  const CMat rt_t = r_t.transpose();
  CMat want(kN * kN, kN * kN);
  for (int a = 0; a < kN; ++a) {
    for (int b = 0; b < kN; ++b) want.block(a * kN, b * kN, kN, kN) = rt_t(a, b) * r_r;
  }
  want /= kN;
  EXPECT_LT((cov - want).norm() / want.norm(), 0.05);
}

TEST(KroneckerChannel, GramTendsToTransmitCorrelation) {
  // With CN(0, 1/N_r) entries, H^H H -> R_t for large N_r.
  const CMat r_t = correlation_matrix({0.8, 4});
  RandomStream s(77, 0);
  const CMat h = apply_kronecker(CMat::Identity(1024, 1024), linalg::principal_sqrt(r_t),
                                 sample_iid(1024, 4, s));
  const CMat gram = h.adjoint() * h;
  EXPECT_LT((gram - r_t).norm() / r_t.norm(), 0.1);
}

}  // namespace
}  // namespace hybridbf::channel
