#pragma once

#include <span>
#include <vector>

#include "hybridbf/linalg.hpp"
#include "hybridbf/rf_filters.hpp"

namespace hybridbf::baseband {

using linalg::EvdResult;

// V = V_RF V_BB.
struct HybridBeamformer {
  rf::RfMatrix rf;
  CMat bb;  // L x d

  int streams() const { return static_cast<int>(bb.cols()); }
  // rf.mat * bb with every column scaled to unit norm. Throws ZeroColumn.
  CMat composed() const;
};

struct PowerAllocation {
  std::vector<double> powers;
  double total = 0.0;
  double water_level = 0.0;  // mu; 0 when not produced by waterfilling

  double sum() const;
};

struct TridiagParams {
  double a = 0.0;  // diagonal
  double b = 0.0;  // first off-diagonal
  int l = 1;
};

/// V_RF^H R_t V_RF.
CMat effective_transmit_correlation(const CMat& r_t, const rf::RfMatrix& v_rf);

/// a = R(0,0), b = Re R(0,1); b = 0 for a 1x1 input.
TridiagParams tridiag_params(const CMat& r_eff);

/// Closed-form eigenpairs of the symmetric tridiagonal Toeplitz matrix:
/// lambda_i = a + 2b cos(i pi / (L+1)), v_i(k) = sqrt(2/(L+1)) sin(k i pi/(L+1)).
/// Pairs are sorted jointly by descending eigenvalue, so b < 0 reverses i.
EvdResult tridiag_eigenpairs(const TridiagParams& p);

/// Dense tridiagonal Toeplitz matrix for (a, b, l).
CMat tridiag_matrix(const TridiagParams& p);

/// Top-d eigenvectors of a Hermitian L x L matrix.
CMat evd_precoder(const CMat& r_eff, int d);

/// Sine precoder columns i = 1..d, unit norm. Needs no correlation input.
CMat closed_form_precoder(int l, int d);

/// p_i = max(0, mu - 1/g_i) with sum p_i = p_total.
PowerAllocation waterfilling(std::span<const double> gains, double p_total);

/// Waterfilling that tolerates non-positive or negligible gains (they get
/// zero power) by running the strict solver over the remaining streams.
PowerAllocation waterfilling_positive(std::span<const double> gains, double p_total,
                                      double rel_floor = 1e-12);

PowerAllocation equal_power(int d, double p_total);

/// W^H = (H_theta^H H)^{-1} H_theta^H.
CMat channel_inversion_postcoder(const CMat& h, const rf::RfMatrix& h_theta);

/// W^H = (H^H H)^{-1} H^H; rows are not normalized, noise is accounted for
/// through w_i^H N w_i by the SINR evaluation.
CMat zero_forcing_postcoder(const CMat& h_eff);

/// W^H = H_eff^H with every row scaled to unit norm.
CMat matched_filter_postcoder(const CMat& h_eff);

}  // namespace hybridbf::baseband
