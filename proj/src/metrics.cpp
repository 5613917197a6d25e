#include "hybridbf/metrics.hpp"

#include <cmath>
#include <string>

#include "hybridbf/channel.hpp"
#include "hybridbf/error.hpp"
#include "hybridbf/rf_filters.hpp"

namespace hybridbf::metrics {

void LinkBudget::validate() const {
  if (!(p_total > 0.0) || !std::isfinite(p_total)) {
    throw Error(ErrorCode::kConfigInvalid, "transmit power must be positive");
  }
  if (noise_cov.rows() > 0 && noise_cov.isIdentity(0.0)) return;
  linalg::require_hermitian(noise_cov, "noise covariance");
  Eigen::LLT<CMat> llt(noise_cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite, "noise covariance is not PD");
  }
}

WaterfilledInput waterfilled_input(const CMat& h_eff, const LinkBudget& budget) {
  if (!h_eff.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "effective channel has NaN/Inf entries");
  }
  if (budget.noise_cov.rows() != h_eff.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "noise covariance does not match the effective channel rows");
  }
  budget.validate();

  // H^H N^{-1} H shares its nonzero eigenvalues with the whitened channel's
  // Gram matrix and is only (cols x cols).
  const bool white = budget.noise_cov.isIdentity(0.0);
  CMat gram = white ? CMat(h_eff.adjoint() * h_eff)
                    : CMat(h_eff.adjoint() * linalg::solve_hermitian(budget.noise_cov, h_eff));
  gram = 0.5 * (gram + gram.adjoint());
  const linalg::EvdResult evd = linalg::hermitian_evd(gram);

  WaterfilledInput out;
  out.gains.assign(evd.eigenvalues.data(),
                   evd.eigenvalues.data() + evd.eigenvalues.size());
  for (double& g : out.gains) g = std::max(g, 0.0);
  out.alloc = baseband::waterfilling_positive(out.gains, budget.p_total);

  RVec p(static_cast<Eigen::Index>(out.alloc.powers.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = out.alloc.powers[i];
  out.q = evd.eigenvectors * p.asDiagonal() * evd.eigenvectors.adjoint();
  return out;
}

RateResult capacity_waterfilled(const CMat& h_eff, const LinkBudget& budget) {
  const WaterfilledInput input = waterfilled_input(h_eff, budget);
  RateResult out;
  out.per_stream.reserve(input.gains.size());
  for (std::size_t i = 0; i < input.gains.size(); ++i) {
    const double r = std::log2(1.0 + input.gains[i] * input.alloc.powers[i]);
    out.per_stream.push_back(r);
    out.total_bits += r;
  }
  return out;
}

RateResult sum_rate_sinr(const CMat& h, const CMat& v, const CMat& w_h,
                         const baseband::PowerAllocation& alloc,
                         const CMat& noise_cov) {
  const Eigen::Index d = v.cols();
  if (h.cols() != v.rows() || w_h.cols() != h.rows() || w_h.rows() != d ||
      static_cast<Eigen::Index>(alloc.powers.size()) != d ||
      noise_cov.rows() != h.rows() || noise_cov.cols() != h.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "sum_rate_sinr operand shapes disagree");
  }

  // Row i, column j: w_i^H H v_j.
  const CMat coupling = w_h * (h * v);
  const CMat noise = noise_cov.isIdentity(0.0) ? CMat(w_h * w_h.adjoint())
                                                : CMat(w_h * noise_cov * w_h.adjoint());

  RateResult out;
  out.per_stream.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    double interference = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j != i) interference += alloc.powers[j] * std::norm(coupling(i, j));
    }
    const double signal = alloc.powers[i] * std::norm(coupling(i, i));
    const double sinr = signal / (interference + noise(i, i).real());
    const double r = std::log2(1.0 + sinr);
    out.per_stream.push_back(r);
    out.total_bits += r;
  }
  return out;
}

RateResult sum_rate_closed_form(std::span<const double> eigvals,
                                const baseband::PowerAllocation& alloc) {
  if (eigvals.size() != alloc.powers.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(eigvals.size()) + " eigenvalues vs " +
                    std::to_string(alloc.powers.size()) + " powers");
  }
  RateResult out;
  for (std::size_t i = 0; i < eigvals.size(); ++i) {
    if (eigvals[i] < 0.0) {
      throw Error(ErrorCode::kDomainError, "negative eigenvalue in closed-form rate");
    }
    const double r = std::log2(1.0 + eigvals[i] * alloc.powers[i]);
    out.per_stream.push_back(r);
    out.total_bits += r;
  }
  return out;
}

double egc_snr_estimate(int trials, int n_r, RandomStream& stream) {
  if (trials < 1 || n_r < 1) {
    throw Error(ErrorCode::kDomainError, "egc_snr_estimate needs trials, n_r >= 1");
  }
  const double sigma = std::sqrt(0.5 / n_r);
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double re = sigma * stream.normal();
    const double im = sigma * stream.normal();
    sum += std::hypot(re, im);
  }
  const double mean = sum / trials;
  return n_r * mean * mean;
}

CrossTermStats egc_cross_term(int trials, int n_r, RandomStream& stream) {
  if (trials < 1 || n_r < 1) {
    throw Error(ErrorCode::kDomainError, "egc_cross_term needs trials, n_r >= 1");
  }
  CrossTermStats stats;
  for (int t = 0; t < trials; ++t) {
    const CMat h = channel::sample_iid(n_r, 2, stream);
    const CMat w = rf::egc_phase_matrix(h.col(0)).mat;
    const cplx cross = w.col(0).dot(h.col(1)) / static_cast<double>(n_r);
    const double signal = h.col(0).cwiseAbs().sum() / n_r;
    stats.cross_power += std::norm(cross);
    stats.signal_power += signal * signal;
  }
  stats.cross_power /= trials;
  stats.signal_power /= trials;
  return stats;
}

}  // namespace hybridbf::metrics
