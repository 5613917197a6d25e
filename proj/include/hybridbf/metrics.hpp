#pragma once

#include <string>
#include <vector>

#include "hybridbf/baseband.hpp"
#include "hybridbf/linalg.hpp"
#include "hybridbf/random.hpp"

namespace hybridbf::metrics {

// Transmit power budget (linear; equals SNR under unit noise) and the
// post-RF noise covariance.
struct LinkBudget {
  double p_total = 1.0;
  CMat noise_cov;

  // Throws ConfigInvalid for p_total <= 0; NotPositiveDefinite otherwise.
  void validate() const;
};

struct RateResult {
  double total_bits = 0.0;  // bits/s/Hz
  std::vector<double> per_stream;
  std::string scheme_label;
};

// Optimal Gaussian input for an effective channel under a trace constraint.
struct WaterfilledInput {
  CMat q;                   // input covariance, trace(q) = p_total
  std::vector<double> gains;  // eigenmode gains sigma_i^2 after whitening
  baseband::PowerAllocation alloc;
};

WaterfilledInput waterfilled_input(const CMat& h_eff, const LinkBudget& budget);

/// sum_i log2(1 + sigma_i^2 p_i) over the whitened channel's eigenmodes.
RateResult capacity_waterfilled(const CMat& h_eff, const LinkBudget& budget);

/// sum_i log2(1 + SINR_i) with
/// SINR_i = p_i |w_i^H H v_i|^2 / (sum_{j != i} p_j |w_i^H H v_j|^2 + w_i^H N w_i).
/// `w_h` holds the postcoder rows w_i^H (d x N_r).
RateResult sum_rate_sinr(const CMat& h, const CMat& v, const CMat& w_h,
                         const baseband::PowerAllocation& alloc,
                         const CMat& noise_cov);

/// sum_i log2(1 + lambda_i p_i).
RateResult sum_rate_closed_form(std::span<const double> eigvals,
                                const baseband::PowerAllocation& alloc);

/// Monte Carlo estimate of N_r (E|h|)^2 for h ~ CN(0, 1/N_r); tends to pi/4.
double egc_snr_estimate(int trials, int n_r, RandomStream& stream);

struct CrossTermStats {
  double cross_power = 0.0;   // mean |(1/N_r) w_i^H h_k|^2
  double signal_power = 0.0;  // mean of ((1/N_r) sum_l |h_i(l)|)^2
  double ratio() const { return cross_power / signal_power; }
};

/// EGC with w_i = phases of an independent column h_i, evaluated against a
/// second independent column h_k, over `trials` draws of N_r-long columns.
CrossTermStats egc_cross_term(int trials, int n_r, RandomStream& stream);

}  // namespace hybridbf::metrics
