#include "hybridbf/baseband.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hybridbf/error.hpp"

namespace hybridbf::baseband {

namespace {

// Matrices with condition number above this are treated as singular.
constexpr double kMaxCondition = 1e12;

void check_stream_count(int l, int d) {
  if (d < 1 || d > l) {
    throw Error(ErrorCode::kStreamCountTooLarge,
                "stream count " + std::to_string(d) + " not in [1, " +
                    std::to_string(l) + "]");
  }
}

double condition_number(const CMat& a) {
  Eigen::JacobiSVD<CMat> svd(a);
  const RVec& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) == 0.0) return INFINITY;
  return s(0) / s(s.size() - 1);
}

}  // namespace

CMat HybridBeamformer::composed() const {
  if (rf.mat.cols() != bb.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "RF and baseband stages do not chain");
  }
  CMat v = rf.mat * bb;
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const double norm = v.col(c).norm();
    if (norm == 0.0) {
      throw Error(ErrorCode::kZeroColumn, "composed precoder column " +
                                              std::to_string(c) + " is zero");
    }
    v.col(c) /= norm;
  }
  return v;
}

double PowerAllocation::sum() const {
  return std::accumulate(powers.begin(), powers.end(), 0.0);
}

CMat effective_transmit_correlation(const CMat& r_t, const rf::RfMatrix& v_rf) {
  if (r_t.rows() != r_t.cols() || r_t.cols() != v_rf.mat.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "R_t is " + std::to_string(r_t.rows()) + "x" +
                    std::to_string(r_t.cols()) + ", V_RF has " +
                    std::to_string(v_rf.mat.rows()) + " rows");
  }
  return v_rf.mat.adjoint() * r_t * v_rf.mat;
}

TridiagParams tridiag_params(const CMat& r_eff) {
  TridiagParams p;
  p.l = static_cast<int>(r_eff.rows());
  p.a = r_eff(0, 0).real();
  p.b = p.l > 1 ? r_eff(0, 1).real() : 0.0;
  return p;
}

EvdResult tridiag_eigenpairs(const TridiagParams& p) {
  if (p.l < 1) throw Error(ErrorCode::kDomainError, "tridiagonal size must be >= 1");
  const int l = p.l;
  const double step = std::numbers::pi / (l + 1);
  const double norm = std::sqrt(2.0 / (l + 1));

  std::vector<int> order(l);
  std::iota(order.begin(), order.end(), 1);
  auto lambda = [&](int i) { return p.a + 2.0 * p.b * std::cos(i * step); };
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return lambda(x) > lambda(y); });

  EvdResult out;
  out.eigenvalues.resize(l);
  out.eigenvectors.resize(l, l);
  for (int c = 0; c < l; ++c) {
    const int i = order[c];
    out.eigenvalues(c) = lambda(i);
    for (int k = 1; k <= l; ++k) {
      out.eigenvectors(k - 1, c) = norm * std::sin(k * i * step);
    }
  }
  return out;
}

CMat tridiag_matrix(const TridiagParams& p) {
  CMat t = CMat::Zero(p.l, p.l);
  for (int i = 0; i < p.l; ++i) {
    t(i, i) = p.a;
    if (i + 1 < p.l) {
      t(i, i + 1) = p.b;
      t(i + 1, i) = p.b;
    }
  }
  return t;
}

CMat evd_precoder(const CMat& r_eff, int d) {
  check_stream_count(static_cast<int>(r_eff.rows()), d);
  const EvdResult evd = linalg::hermitian_evd(r_eff);
  return evd.eigenvectors.leftCols(d);
}

CMat closed_form_precoder(int l, int d) {
  check_stream_count(l, d);
  const double step = std::numbers::pi / (l + 1);
  const double norm = std::sqrt(2.0 / (l + 1));
  CMat v(l, d);
  for (int i = 1; i <= d; ++i) {
    for (int k = 1; k <= l; ++k) v(k - 1, i - 1) = norm * std::sin(k * i * step);
  }
  return v;
}

PowerAllocation waterfilling(std::span<const double> gains, double p_total) {
  if (gains.empty()) throw Error(ErrorCode::kEmptyGains, "no streams to waterfill");
  if (!(p_total > 0.0)) {
    throw Error(ErrorCode::kNonPositivePower, "total power must be positive");
  }
  for (double g : gains) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::kDomainError, "waterfilling gains must be positive and finite");
    }
  }

  const std::size_t d = gains.size();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return gains[x] > gains[y]; });

  // Grow the active set strongest-first; the last m for which the water
  // level clears the m-th inverse gain is the KKT solution.
  double inv_sum = 0.0;
  double mu = 0.0;
  std::size_t active = 0;
  for (std::size_t m = 1; m <= d; ++m) {
    const double inv = 1.0 / gains[order[m - 1]];
    const double candidate = (p_total + inv_sum + inv) / static_cast<double>(m);
    if (candidate <= inv) break;
    inv_sum += inv;
    mu = candidate;
    active = m;
  }

  PowerAllocation out;
  out.total = p_total;
  out.water_level = mu;
  out.powers.assign(d, 0.0);
  for (std::size_t m = 0; m < active; ++m) {
    out.powers[order[m]] = mu - 1.0 / gains[order[m]];
  }
  return out;
}

PowerAllocation waterfilling_positive(std::span<const double> gains, double p_total,
                                      double rel_floor) {
  double g_max = 0.0;
  for (double g : gains) g_max = std::max(g_max, g);
  std::vector<std::size_t> keep;
  std::vector<double> kept_gains;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (gains[i] > rel_floor * g_max && gains[i] > 0.0) {
      keep.push_back(i);
      kept_gains.push_back(gains[i]);
    }
  }
  PowerAllocation out;
  out.total = p_total;
  out.powers.assign(gains.size(), 0.0);
  if (kept_gains.empty()) return out;
  const PowerAllocation inner = waterfilling(kept_gains, p_total);
  for (std::size_t i = 0; i < keep.size(); ++i) out.powers[keep[i]] = inner.powers[i];
  out.water_level = inner.water_level;
  return out;
}

PowerAllocation equal_power(int d, double p_total) {
  if (d < 1) throw Error(ErrorCode::kEmptyGains, "no streams");
  if (!(p_total > 0.0)) {
    throw Error(ErrorCode::kNonPositivePower, "total power must be positive");
  }
  PowerAllocation out;
  out.total = p_total;
  out.powers.assign(d, p_total / d);
  return out;
}

CMat channel_inversion_postcoder(const CMat& h, const rf::RfMatrix& h_theta) {
  if (h.rows() != h_theta.mat.rows() || h.cols() != h_theta.mat.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "H and H_theta shapes differ");
  }
  const CMat effective = h_theta.mat.adjoint() * h;
  if (!effective.allFinite() || condition_number(effective) > kMaxCondition) {
    throw Error(ErrorCode::kSingularEffectiveChannel,
                "H_theta^H H is singular or too ill-conditioned");
  }
  return effective.partialPivLu().solve(h_theta.mat.adjoint());
}

CMat zero_forcing_postcoder(const CMat& h_eff) {
  const CMat gram = h_eff.adjoint() * h_eff;
  if (!gram.allFinite() || condition_number(gram) > kMaxCondition) {
    throw Error(ErrorCode::kSingularEffectiveChannel,
                "effective channel Gram matrix is singular");
  }
  // Gram matrices are Hermitian only up to round-off.
  const CMat sym = 0.5 * (gram + gram.adjoint());
  return linalg::solve_hermitian(sym, h_eff.adjoint());
}

CMat matched_filter_postcoder(const CMat& h_eff) {
  CMat w = h_eff.adjoint();
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    const double norm = w.row(r).norm();
    if (norm == 0.0) {
      throw Error(ErrorCode::kZeroColumn,
                  "effective channel column " + std::to_string(r) + " is zero");
    }
    w.row(r) /= norm;
  }
  return w;
}

}  // namespace hybridbf::baseband
