#include "hybridbf/baseband.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "hybridbf/channel.hpp"
#include "hybridbf/metrics.hpp"
#include "test_util.hpp"

namespace hybridbf::baseband {
namespace {

using testing::expect_error;
using testing::random_matrix;

constexpr double kPi = std::numbers::pi;

CMat corr(double alpha, int n) {
  return channel::correlation_matrix(channel::CorrelationProfile(alpha, n));
}

rf::RfMatrix wrap(const CMat& m) { return rf::RfMatrix{m, rf::RfKind::kAntennaSelection, 0}; }

TEST(EffectiveCorrelation, IdentityRfIsPassthrough) {
  const CMat r = corr(0.7, 6);
  const CMat got = effective_transmit_correlation(r, wrap(CMat::Identity(6, 6)));
  EXPECT_LT((got - r).norm(), 1e-15);
}

TEST(EffectiveCorrelation, SpreaderExample) {
  const CMat got = effective_transmit_correlation(corr(0.9, 4), rf::column_spreader(4, 2));
  EXPECT_NEAR(got(0, 0).real(), 1.9, 1e-12);
  EXPECT_NEAR(got(1, 1).real(), 1.9, 1e-12);
  const double off = 0.5 * (std::pow(0.9, 4) + std::pow(0.9, 9) + 0.9 + std::pow(0.9, 4));
  EXPECT_NEAR(got(0, 1).real(), off, 1e-12);
  EXPECT_NEAR(got(0, 1).imag(), 0.0, 1e-15);
}

TEST(EffectiveCorrelation, OrthonormalColumnsOfWhiteInput) {
  const CMat q = random_matrix(8, 3, 2).householderQr().householderQ() * CMat::Identity(8, 3);
  const CMat got = effective_transmit_correlation(CMat::Identity(8, 8), wrap(q));
  EXPECT_LT((got - CMat::Identity(3, 3)).norm(), 1e-13);
}

TEST(EffectiveCorrelation, ShapeMismatch) {
  expect_error(ErrorCode::kDimensionMismatch, [] {
    effective_transmit_correlation(CMat::Identity(4, 4), rf::column_spreader(6, 2));
  });
}

TEST(Tridiag, TwoByTwo) {
  const EvdResult e = tridiag_eigenpairs({2.0, 1.0, 2});
  EXPECT_NEAR(e.eigenvalues(0), 3.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues(1), 1.0, 1e-14);
  const double s = 1 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.eigenvectors(0, 0)), s, 1e-14);
  EXPECT_NEAR(std::abs(e.eigenvectors(1, 0)), s, 1e-14);
  EXPECT_NEAR(std::abs(e.eigenvectors(0, 1) + e.eigenvectors(1, 1)), 0.0, 1e-14);
}

TEST(Tridiag, ScalarAndDiagonal) {
  const EvdResult one = tridiag_eigenpairs({5.0, 0.7, 1});
  EXPECT_NEAR(one.eigenvalues(0), 5.0, 1e-15);
  EXPECT_NEAR(std::abs(one.eigenvectors(0, 0)), 1.0, 1e-15);
  const EvdResult flat = tridiag_eigenpairs({1.0, 0.0, 5});
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(flat.eigenvalues(i), 1.0, 1e-15);
}

// Independent oracle: dense self-adjoint solver on the constructed matrix.
TEST(Tridiag, MatchesDenseSolverOverGrid) {
  for (int l : {1, 2, 3, 5, 8, 16, 33, 64}) {
    for (double a : {0.5, 1.0, 4.0}) {
      for (double b : {-0.9, -0.2, 0.0, 0.3, 0.9}) {
        const TridiagParams p{a, b, l};
        const EvdResult closed = tridiag_eigenpairs(p);
        const CMat t = tridiag_matrix(p);
        Eigen::SelfAdjointEigenSolver<CMat> dense(t);
        RVec want = dense.eigenvalues().reverse();
        for (int i = 0; i < l; ++i) {
          EXPECT_NEAR(closed.eigenvalues(i), want(i), 1e-10 * std::max(1.0, std::abs(want(i))));
        }
        const CMat& v = closed.eigenvectors;
        EXPECT_LT((t * v - v * closed.eigenvalues.cast<cplx>().asDiagonal().toDenseMatrix()).norm(),
                  1e-10);
        EXPECT_LT((v.adjoint() * v - CMat::Identity(l, l)).norm(), 1e-10);
      }
    }
  }
}

TEST(Tridiag, NegativeOffDiagonalSortsDescending) {
  const EvdResult e = tridiag_eigenpairs({1.0, -0.4, 6});
  for (int i = 1; i < 6; ++i) EXPECT_GE(e.eigenvalues(i - 1), e.eigenvalues(i));
  EXPECT_NEAR(e.eigenvalues(0), 1.0 + 0.8 * std::cos(kPi / 7), 1e-14);
}

TEST(Tridiag, ParamsFromMatrix) {
  const TridiagParams p = tridiag_params(tridiag_matrix({1.9, 0.41, 4}));
  EXPECT_DOUBLE_EQ(p.a, 1.9);
  EXPECT_DOUBLE_EQ(p.b, 0.41);
  EXPECT_EQ(p.l, 4);
  EXPECT_EQ(tridiag_params(CMat::Constant(1, 1, 3.0)).b, 0.0);
  expect_error(ErrorCode::kDomainError, [] { tridiag_eigenpairs({1.0, 0.0, 0}); });
}

TEST(EvdPrecoder, DiagonalPicksLargest) {
  CMat r = CMat::Zero(2, 2);
  r(0, 0) = 3;
  r(1, 1) = 1;
  const CMat v = evd_precoder(r, 1);
  EXPECT_NEAR(std::abs(v(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(v(1, 0)), 0.0, 1e-14);
  expect_error(ErrorCode::kStreamCountTooLarge, [&] { evd_precoder(r, 3); });
  expect_error(ErrorCode::kStreamCountTooLarge, [&] { evd_precoder(r, 0); });
}

// For exactly tridiagonal Toeplitz input the EVD and sine precoders span the
// same dominant subspace.
TEST(EvdPrecoder, AgreesWithClosedFormOnTridiagonal) {
  for (int l : {4, 8, 12}) {
    const CMat t = tridiag_matrix({2.0, 0.6, l});
    for (int d = 1; d < l; ++d) {
      const CMat a = evd_precoder(t, d);
      const CMat b = closed_form_precoder(l, d);
      Eigen::JacobiSVD<CMat> svd(a.adjoint() * b);
      // Smallest cosine of the principal angles.
      EXPECT_GT(svd.singularValues().minCoeff(), 1 - 1e-10) << l << " " << d;
    }
  }
}

TEST(ClosedFormPrecoder, Examples) {
  EXPECT_NEAR(closed_form_precoder(1, 1)(0, 0).real(), 1.0, 1e-15);
  const CMat v = closed_form_precoder(2, 1);
  EXPECT_NEAR(v(0, 0).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(v(1, 0).real(), 1 / std::sqrt(2.0), 1e-15);
  for (int l : {3, 7, 20}) {
    const CMat m = closed_form_precoder(l, l);
    EXPECT_LT((m.adjoint() * m - CMat::Identity(l, l)).norm(), 1e-12);
  }
  expect_error(ErrorCode::kStreamCountTooLarge, [] { closed_form_precoder(3, 4); });
}

TEST(Waterfilling, EqualGainsSplitEvenly) {
  const std::vector<double> g{2.0, 2.0, 2.0, 2.0};
  const PowerAllocation a = waterfilling(g, 8.0);
  for (double p : a.powers) EXPECT_NEAR(p, 2.0, 1e-14);
  EXPECT_NEAR(a.water_level, 2.5, 1e-14);
}

TEST(Waterfilling, WorkedExamples) {
  const std::vector<double> g{1.0, 0.5};
  const PowerAllocation a = waterfilling(g, 3.0);
  EXPECT_NEAR(a.water_level, 3.0, 1e-14);
  EXPECT_NEAR(a.powers[0], 2.0, 1e-14);
  EXPECT_NEAR(a.powers[1], 1.0, 1e-14);

  const std::vector<double> weak{1.0, 0.01};
  const PowerAllocation b = waterfilling(weak, 0.5);
  EXPECT_NEAR(b.powers[0], 0.5, 1e-14);
  EXPECT_EQ(b.powers[1], 0.0);
}

TEST(Waterfilling, OrderOfGainsDoesNotMatter) {
  const std::vector<double> g{0.1, 3.0, 0.7}, h{3.0, 0.7, 0.1};
  const PowerAllocation a = waterfilling(g, 2.0), b = waterfilling(h, 2.0);
  EXPECT_NEAR(a.powers[1], b.powers[0], 1e-14);
  EXPECT_NEAR(a.powers[2], b.powers[1], 1e-14);
  EXPECT_NEAR(a.powers[0], b.powers[2], 1e-14);
}

// KKT: active streams sit on a common level, inactive ones are above it.
TEST(Waterfilling, KktOnRandomInputs) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1e-3, 10.0);
  std::uniform_real_distribution<double> logp(-3.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 16);
    std::vector<double> g(n);
    for (double& x : g) x = u(rng);
    const double p = std::pow(10.0, logp(rng));
    const PowerAllocation a = waterfilling(g, p);
    EXPECT_NEAR(a.sum(), p, 1e-10 * p);
    for (int i = 0; i < n; ++i) {
      EXPECT_GE(a.powers[i], 0.0);
      if (a.powers[i] > 0) {
        EXPECT_NEAR(a.powers[i] + 1 / g[i], a.water_level, 1e-9 * a.water_level);
      } else {
        EXPECT_GE(1 / g[i], a.water_level * (1 - 1e-12));
      }
    }
    // Power is nonincreasing in 1/g.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (g[i] > g[j]) EXPECT_GE(a.powers[i] + 1e-12, a.powers[j]);
      }
    }
  }
}

TEST(Waterfilling, Errors) {
  const std::vector<double> empty, good{1.0}, bad{1.0, 0.0};
  expect_error(ErrorCode::kEmptyGains, [&] { waterfilling(empty, 1.0); });
  expect_error(ErrorCode::kNonPositivePower, [&] { waterfilling(good, 0.0); });
  expect_error(ErrorCode::kDomainError, [&] { waterfilling(bad, 1.0); });
}

TEST(Waterfilling, PositiveVariantSkipsDeadModes) {
  const std::vector<double> g{1.0, 0.0, -1e-17, 0.5};
  const PowerAllocation a = waterfilling_positive(g, 3.0);
  EXPECT_NEAR(a.powers[0], 2.0, 1e-14);
  EXPECT_EQ(a.powers[1], 0.0);
  EXPECT_EQ(a.powers[2], 0.0);
  EXPECT_NEAR(a.powers[3], 1.0, 1e-14);
}

TEST(Waterfilling, HighSnrApproachesEqualPower) {
  const std::vector<double> g{3.0, 2.0, 1.0, 0.5};
  const double p = 1e4;
  const PowerAllocation wf = waterfilling(g, p), eq = equal_power(4, p);
  const std::vector<double> lam(g.begin(), g.end());
  const double r_wf = metrics::sum_rate_closed_form(lam, wf).total_bits;
  const double r_eq = metrics::sum_rate_closed_form(lam, eq).total_bits;
  EXPECT_GE(r_wf, r_eq);
  EXPECT_LT((r_wf - r_eq) / r_eq, 0.02);
}

TEST(EqualPower, SplitsAndValidates) {
  const PowerAllocation a = equal_power(4, 2.0);
  for (double p : a.powers) EXPECT_DOUBLE_EQ(p, 0.5);
  expect_error(ErrorCode::kEmptyGains, [] { equal_power(0, 1.0); });
  expect_error(ErrorCode::kNonPositivePower, [] { equal_power(2, -1.0); });
}

TEST(ChannelInversion, ScalarAndDiagonal) {
  CMat h(1, 1);
  h << 2.0;
  EXPECT_NEAR(std::abs(channel_inversion_postcoder(h, wrap(CMat::Identity(1, 1)))(0, 0) - 0.5),
              0.0, 1e-15);
  CMat d = CMat::Zero(3, 3);
  d.diagonal() << 1.0, 2.0, 4.0;
  const CMat w = channel_inversion_postcoder(d, wrap(CMat::Identity(3, 3)));
  EXPECT_LT((w * d - CMat::Identity(3, 3)).norm(), 1e-14);
}

TEST(ChannelInversion, InvertsEffectiveChannel) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CMat h = random_matrix(8, 3, seed);
    const rf::RfMatrix theta = rf::egc_phase_matrix(h);
    const CMat w = channel_inversion_postcoder(h, theta);
    EXPECT_LT((w * h - CMat::Identity(3, 3)).norm(), 1e-8);
  }
}

TEST(ChannelInversion, Singular) {
  CMat h = CMat::Ones(4, 2);
  expect_error(ErrorCode::kSingularEffectiveChannel,
               [&] { channel_inversion_postcoder(h, rf::egc_phase_matrix(h)); });
  expect_error(ErrorCode::kDimensionMismatch,
               [&] { channel_inversion_postcoder(h, wrap(CMat::Identity(4, 4))); });
}

TEST(ZeroForcing, LeftInverse) {
  const CMat h = random_matrix(12, 4, 9);
  EXPECT_LT((zero_forcing_postcoder(h) * h - CMat::Identity(4, 4)).norm(), 1e-10);
  expect_error(ErrorCode::kSingularEffectiveChannel,
               [] { zero_forcing_postcoder(CMat::Ones(4, 2)); });
}

TEST(MatchedFilter, Examples) {
  CMat h = CMat::Zero(3, 1);
  h(0, 0) = 1.0;
  const CMat w = matched_filter_postcoder(h);
  EXPECT_LT((w - h.adjoint()).norm(), 1e-15);

  const CMat a = random_matrix(6, 2, 4);
  EXPECT_LT((matched_filter_postcoder(a) - matched_filter_postcoder(7.5 * a)).norm(), 1e-13);
  const CMat wa = matched_filter_postcoder(a);
  for (int r = 0; r < 2; ++r) EXPECT_NEAR(wa.row(r).norm(), 1.0, 1e-14);

  expect_error(ErrorCode::kZeroColumn, [] { matched_filter_postcoder(CMat::Zero(3, 1)); });
}

TEST(MatchedFilter, SingleStreamSnrIsChannelEnergy) {
  const CMat h = random_matrix(5, 1, 11);
  const CMat w = matched_filter_postcoder(h);
  const double p = 2.5;
  const double snr = p * std::norm((w * h)(0, 0));
  EXPECT_NEAR(snr, h.squaredNorm() * p, 1e-12 * snr);
}

TEST(HybridBeamformer, ComposedColumnsUnitNorm) {
  const HybridBeamformer bf{rf::column_spreader(8, 2), closed_form_precoder(4, 3)};
  EXPECT_EQ(bf.streams(), 3);
  const CMat v = bf.composed();
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(v.col(c).norm(), 1.0, 1e-14);

  const HybridBeamformer zero{rf::column_spreader(4, 2), CMat::Zero(2, 1)};
  expect_error(ErrorCode::kZeroColumn, [&] { (void)zero.composed(); });
  const HybridBeamformer bad{rf::column_spreader(4, 2), CMat::Ones(3, 1)};
  expect_error(ErrorCode::kDimensionMismatch, [&] { (void)bad.composed(); });
}

}  // namespace
}  // namespace hybridbf::baseband
