#include "hybridbf/channel.hpp"

#include <cmath>
#include <string>

#include "hybridbf/error.hpp"

namespace hybridbf {

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t index,
                           StreamPurpose purpose)
    : master_seed_(master_seed), index_(index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(purpose)};
  engine_.seed(seq);
}

namespace channel {

CorrelationProfile::CorrelationProfile(double alpha, int n) : alpha_(alpha), n_(n) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kDomainError,
                "correlation alpha must lie in [0, 1), got " + std::to_string(alpha));
  }
  if (n < 1) {
    throw Error(ErrorCode::kDomainError, "array size must be >= 1");
  }
}

CMat correlation_matrix(const CorrelationProfile& profile) {
  const int n = profile.n();
  CMat r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = static_cast<double>(i - j);
      // std::pow(0, 0) == 1 gives the unit diagonal at alpha = 0.
      r(i, j) = std::pow(profile.alpha(), d * d);
    }
  }
  return r;
}

CMat sample_iid(int n_r, int n_t, RandomStream& stream) {
  if (n_r < 1 || n_t < 1) {
    throw Error(ErrorCode::kDomainError, "sample_iid needs positive dimensions");
  }
  const double sigma = std::sqrt(0.5 / n_r);
  CMat g(n_r, n_t);
  // Column-major fill order is part of the reproducibility contract.
  for (int j = 0; j < n_t; ++j) {
    for (int i = 0; i < n_r; ++i) {
      const double re = stream.normal();
      const double im = stream.normal();
      g(i, j) = cplx(sigma * re, sigma * im);
    }
  }
  return g;
}

namespace {

bool is_identity(const CMat& a) {
  return a.rows() == a.cols() && a == CMat::Identity(a.rows(), a.cols());
}

}  // namespace

CMat apply_kronecker(const CMat& sqrt_r_r, const CMat& sqrt_r_t, const CMat& g) {
  if (sqrt_r_r.rows() != g.rows() || sqrt_r_r.cols() != g.rows() ||
      sqrt_r_t.rows() != g.cols() || sqrt_r_t.cols() != g.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "correlation sizes do not match the " + std::to_string(g.rows()) +
                    "x" + std::to_string(g.cols()) + " channel");
  }
  CMat h = g;
  if (!is_identity(sqrt_r_r)) h = sqrt_r_r * h;
  if (!is_identity(sqrt_r_t)) h = h * sqrt_r_t.adjoint();
  return h;
}

ChannelRealization kronecker_channel(const CMat& r_r, const CMat& r_t,
                                     const CMat& g) {
  if (r_r.rows() != g.rows() || r_t.rows() != g.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "kronecker_channel size mismatch");
  }
  ChannelRealization out;
  out.h = apply_kronecker(linalg::principal_sqrt(r_r), linalg::principal_sqrt(r_t), g);
  out.n_r = static_cast<int>(g.rows());
  out.n_t = static_cast<int>(g.cols());
  return out;
}

}  // namespace channel
}  // namespace hybridbf
