#pragma once

#include <cstdint>

#include "hybridbf/linalg.hpp"
#include "hybridbf/random.hpp"

namespace hybridbf::channel {

// Exponent-of-squared-distance correlation of a uniform linear array:
// R(i, j) = alpha^((i - j)^2).
class CorrelationProfile {
 public:
  // Throws DomainError unless 0 <= alpha < 1 and n >= 1.
  CorrelationProfile(double alpha, int n);

  double alpha() const { return alpha_; }
  int n() const { return n_; }

 private:
  double alpha_;
  int n_;
};

struct SeedPath {
  std::uint64_t master_seed = 0;
  std::uint64_t trial = 0;
};

struct ChannelRealization {
  CMat h;  // n_r x n_t
  int n_r = 0;
  int n_t = 0;
  SeedPath seed_path;
};

CMat correlation_matrix(const CorrelationProfile& profile);

/// n_r x n_t matrix of i.i.d. CN(0, 1/n_r) entries drawn from `stream`.
CMat sample_iid(int n_r, int n_t, RandomStream& stream);

/// H = R_r^{1/2} G R_t^{1/2 H}. Identity correlations leave g untouched.
ChannelRealization kronecker_channel(const CMat& r_r, const CMat& r_t,
                                     const CMat& g);

// Same model with precomputed principal roots; the harness hoists the
// square roots out of the trial loop.
CMat apply_kronecker(const CMat& sqrt_r_r, const CMat& sqrt_r_t, const CMat& g);

}  // namespace hybridbf::channel
