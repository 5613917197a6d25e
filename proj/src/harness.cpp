#include "hybridbf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <thread>

#include "hybridbf/baseband.hpp"
#include "hybridbf/channel.hpp"
#include "hybridbf/error.hpp"
#include "hybridbf/metrics.hpp"
#include "hybridbf/random.hpp"
#include "hybridbf/rf_filters.hpp"

namespace hybridbf::harness {

namespace {

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kConfigInvalid, message);
}

bool needs_full_rank_receive(BasebandScheme bb) {
  return bb != BasebandScheme::kCapacity && bb != BasebandScheme::kClosedFormRate;
}

bool uses_ccit_precoder(BasebandScheme bb) {
  switch (bb) {
    case BasebandScheme::kClosedZf:
    case BasebandScheme::kClosedMf:
    case BasebandScheme::kEvdZf:
    case BasebandScheme::kEvdMf:
    case BasebandScheme::kClosedFormRate:
      return true;
    default:
      return false;
  }
}

bool is_exact_identity(const CMat& a) {
  return a.rows() == a.cols() && a == CMat::Identity(a.rows(), a.cols());
}

// Everything about a scheme that does not depend on the trial's channel.
struct SchemeContext {
  SchemeSpec spec;
  std::string label;
  Resolved res;
  std::optional<rf::RfMatrix> tx;  // empty for per-trial (CSI-based) RF stages
  std::optional<CMat> rx_h;        // W_RF^H, two-sided schemes only
  CMat noise;                      // post-RF noise covariance
  bool noise_identity = true;
  CMat v_bb;                       // CCIT precoder
  std::vector<double> ccit_gains;  // gain per v_bb column
  std::vector<int> dft_columns;
};

struct SharedModel {
  CMat r_t;
  CMat sqrt_r_r;
  CMat sqrt_r_t;
};

std::vector<int> draw_columns(int n, int l, std::uint64_t seed, std::uint64_t index) {
  RandomStream stream(seed, index, StreamPurpose::kDftColumns);
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  // Partial Fisher-Yates: the first l slots are a uniform l-subset.
  for (int i = 0; i < l; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[i], pool[pick(stream.engine())]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + l);
  std::sort(out.begin(), out.end());
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(v[i]);
  }
  return s;
}

void set_ccit_precoder(SchemeContext& ctx, const CMat& r_eff) {
  const int l = static_cast<int>(r_eff.rows());
  switch (ctx.spec.baseband) {
    case BasebandScheme::kClosedZf:
    case BasebandScheme::kClosedMf: {
      // Column i of the sine precoder pairs with a + 2b cos(i pi / (L+1)).
      const baseband::TridiagParams p = baseband::tridiag_params(r_eff);
      ctx.v_bb = baseband::closed_form_precoder(l, l);
      ctx.ccit_gains.resize(l);
      for (int i = 1; i <= l; ++i) {
        ctx.ccit_gains[i - 1] = p.a + 2.0 * p.b * std::cos(i * std::numbers::pi / (l + 1));
      }
      break;
    }
    case BasebandScheme::kEvdZf:
    case BasebandScheme::kEvdMf: {
      const linalg::EvdResult evd = linalg::hermitian_evd(r_eff);
      ctx.v_bb = evd.eigenvectors;
      ctx.ccit_gains.assign(evd.eigenvalues.data(), evd.eigenvalues.data() + l);
      break;
    }
    case BasebandScheme::kClosedFormRate: {
      const linalg::EvdResult evd =
          baseband::tridiag_eigenpairs(baseband::tridiag_params(r_eff));
      ctx.ccit_gains.assign(evd.eigenvalues.data(), evd.eigenvalues.data() + l);
      break;
    }
    default:
      break;
  }
}

SchemeContext build_context(const ExperimentConfig& cfg, const SchemeSpec& spec,
                            std::size_t index, const SharedModel& model,
                            std::vector<std::string>& notes) {
  SchemeContext ctx;
  ctx.spec = spec;
  ctx.label = spec.label();
  ctx.res = resolve(cfg, spec, &notes);
  const int n_t = cfg.n_t;
  const int l = ctx.res.l;

  switch (spec.rf) {
    case RfScheme::kFull: {
      std::vector<int> all(n_t);
      for (int i = 0; i < n_t; ++i) all[i] = i;
      ctx.tx = rf::antenna_selection(n_t, all);
      break;
    }
    case RfScheme::kColumnSpreader:
    case RfScheme::kSpreaderCombiner:
      ctx.tx = rf::column_spreader(n_t, ctx.res.k);
      break;
    case RfScheme::kDft:
    case RfScheme::kDftBoth:
      ctx.dft_columns = draw_columns(n_t, l, cfg.master_seed, 2 * index);
      ctx.tx = rf::dft_projection(n_t, ctx.dft_columns);
      notes.push_back(ctx.label + ": transmit DFT columns [" + join(ctx.dft_columns) + "]");
      break;
    case RfScheme::kSelection: {
      std::vector<int> picks(l);
      for (int c = 0; c < l; ++c) {
        picks[c] = static_cast<int>((static_cast<long long>(c) * n_t) / l);
      }
      ctx.tx = rf::antenna_selection(n_t, picks);
      break;
    }
    case RfScheme::kPhaseAligned:
      break;
  }

  if (spec.rf == RfScheme::kSpreaderCombiner) {
    ctx.rx_h = rf::row_combiner(cfg.n_r, ctx.res.k_r).mat;
  } else if (spec.rf == RfScheme::kDftBoth) {
    const std::vector<int> cols =
        draw_columns(cfg.n_r, ctx.res.l_r, cfg.master_seed, 2 * index + 1);
    notes.push_back(ctx.label + ": receive DFT columns [" + join(cols) + "]");
    ctx.rx_h = rf::dft_projection(cfg.n_r, cols).mat.adjoint();
  }
  if (ctx.rx_h) {
    ctx.noise = *ctx.rx_h * ctx.rx_h->adjoint();
    ctx.noise = 0.5 * (ctx.noise + ctx.noise.adjoint());
  } else {
    ctx.noise = CMat::Identity(cfg.n_r, cfg.n_r);
  }
  ctx.noise_identity = is_exact_identity(ctx.noise);

  if (ctx.tx && uses_ccit_precoder(spec.baseband)) {
    set_ccit_precoder(ctx, baseband::effective_transmit_correlation(model.r_t, *ctx.tx));
  }
  return ctx;
}

CMat noise_inverse_times(const SchemeContext& ctx, const CMat& a) {
  return ctx.noise_identity ? a : linalg::solve_hermitian(ctx.noise, a);
}

baseband::PowerAllocation allocate(PowerPolicy policy, std::span<const double> gains,
                                   double p_total) {
  if (policy == PowerPolicy::kEqual) {
    return baseband::equal_power(static_cast<int>(gains.size()), p_total);
  }
  return baseband::waterfilling_positive(gains, p_total);
}

// Rates of one scheme on one channel draw, one entry per transmit power.
std::vector<double> evaluate(const SchemeContext& base, const CMat& h,
                             const SharedModel& model, std::span<const double> powers) {
  SchemeContext trial_ctx;
  const SchemeContext* ctx = &base;
  if (!base.tx) {
    // CSI-dependent RF stage: rebuild the per-trial pieces.
    trial_ctx = base;
    trial_ctx.tx = rf::phase_aligned_spreader(h, base.res.k);
    if (uses_ccit_precoder(base.spec.baseband)) {
      set_ccit_precoder(trial_ctx,
                        baseband::effective_transmit_correlation(model.r_t, *trial_ctx.tx));
    }
    ctx = &trial_ctx;
  }
  const rf::RfMatrix& v_rf = *ctx->tx;
  const CMat h_rx = ctx->rx_h ? CMat(*ctx->rx_h * h) : h;
  const CMat h_eff = h_rx * v_rf.mat;
  const int l = static_cast<int>(h_eff.cols());
  const PowerPolicy policy = ctx->spec.power;

  std::vector<double> rates;
  rates.reserve(powers.size());

  switch (ctx->spec.baseband) {
    case BasebandScheme::kCapacity: {
      CMat gram;
      if (policy == PowerPolicy::kEqual) {
        gram = h_eff.adjoint() * noise_inverse_times(*ctx, h_eff);
        gram = 0.5 * (gram + gram.adjoint());
      }
      for (double p : powers) {
        if (policy == PowerPolicy::kWaterfill) {
          rates.push_back(metrics::capacity_waterfilled(h_eff, {p, ctx->noise}).total_bits);
        } else {
          const CMat m = CMat::Identity(l, l) + (p / l) * gram;
          rates.push_back(linalg::logdet_hpd(m));
        }
      }
      return rates;
    }
    case BasebandScheme::kClosedFormRate: {
      std::vector<double> lambda = ctx->ccit_gains;
      for (double& x : lambda) x = std::max(x, 0.0);
      for (double p : powers) {
        rates.push_back(
            metrics::sum_rate_closed_form(lambda, allocate(policy, ctx->ccit_gains, p))
                .total_bits);
      }
      return rates;
    }
    default:
      break;
  }

  // Linear precoder + linear receive filter, evaluated through the SINR.
  CMat v_bb;
  std::vector<double> gains;
  bool zero_forcing = false;
  switch (ctx->spec.baseband) {
    case BasebandScheme::kCsit: {
      CMat gram = h_eff.adjoint() * noise_inverse_times(*ctx, h_eff);
      gram = 0.5 * (gram + gram.adjoint());
      const linalg::EvdResult evd = linalg::hermitian_evd(gram);
      int d = 0;
      const double floor = 1e-12 * std::max(evd.eigenvalues(0), 0.0);
      while (d < l && evd.eigenvalues(d) > floor) ++d;
      v_bb = evd.eigenvectors.leftCols(d);
      gains.assign(evd.eigenvalues.data(), evd.eigenvalues.data() + d);
      break;
    }
    case BasebandScheme::kClosedZf:
    case BasebandScheme::kEvdZf:
      zero_forcing = true;
      [[fallthrough]];
    case BasebandScheme::kClosedMf:
    case BasebandScheme::kEvdMf:
      v_bb = ctx->v_bb;
      gains = ctx->ccit_gains;
      break;
    case BasebandScheme::kMatchedFilter:
      v_bb = CMat::Identity(l, l);
      break;
    default:
      break;
  }

  const baseband::HybridBeamformer bf{v_rf, v_bb};
  const CMat v = bf.composed();
  const CMat a = h_rx * v;
  const CMat ninv_a = noise_inverse_times(*ctx, a);
  if (ctx->spec.baseband == BasebandScheme::kMatchedFilter) {
    // Interference-free stream gains a_i^H N^{-1} a_i.
    gains.resize(l);
    for (int i = 0; i < l; ++i) gains[i] = a.col(i).dot(ninv_a.col(i)).real();
  }
  const CMat w_h = zero_forcing ? baseband::zero_forcing_postcoder(a)
                                : baseband::matched_filter_postcoder(ninv_a);
  for (double p : powers) {
    rates.push_back(
        metrics::sum_rate_sinr(h_rx, v, w_h, allocate(policy, gains, p), ctx->noise)
            .total_bits);
  }
  return rates;
}

}  // namespace

Resolved resolve(const ExperimentConfig& cfg, const SchemeSpec& scheme,
                 std::vector<std::string>* notes) {
  Resolved r;
  const int n_t = cfg.n_t;
  auto from_k = [&](int k) {
    if (k < 1 || n_t % k != 0) {
      invalid(scheme.label() + ": cluster size " + std::to_string(k) +
              " does not divide n_t = " + std::to_string(n_t));
    }
    r.k = k;
    r.l = n_t / k;
  };
  auto from_l = [&](int l) {
    if (l < 1 || l > n_t) {
      invalid(scheme.label() + ": RF chain count " + std::to_string(l) +
              " outside [1, n_t = " + std::to_string(n_t) + "]");
    }
    r.l = l;
    r.k = n_t % l == 0 ? n_t / l : 0;
  };

  if (scheme.rf == RfScheme::kFull) {
    r.k = 1;
    r.l = n_t;
  } else if (scheme.l) {
    from_l(*scheme.l);
  } else if (scheme.k) {
    from_k(*scheme.k);
  } else if (cfg.k) {
    from_k(*cfg.k);
  } else if (cfg.l_t) {
    from_l(*cfg.l_t);
  } else {
    const int k_c = cfg.alpha_t > 0.0 ? rf::cluster_size(cfg.alpha_t, cfg.epsilon) : 1;
    const int k = rf::smallest_divisor_at_least(n_t, k_c);
    if (notes && k != k_c) {
      notes->push_back(scheme.label() + ": cluster-size heuristic gives K_c = " +
                       std::to_string(k_c) + ", using divisor K = " + std::to_string(k) +
                       " of n_t = " + std::to_string(n_t));
    }
    from_k(k);
  }

  if (is_two_sided(scheme.rf)) {
    r.l_r = cfg.l_r.value_or(r.l);
    if (r.l_r < 1 || r.l_r > cfg.n_r) {
      invalid(scheme.label() + ": receive RF chains " + std::to_string(r.l_r) +
              " outside [1, n_r]");
    }
    r.k_r = cfg.n_r % r.l_r == 0 ? cfg.n_r / r.l_r : 0;
    if (notes && cfg.alpha_r > 0.0 && scheme.rf == RfScheme::kSpreaderCombiner) {
      notes->push_back(scheme.label() + ": receive cluster-size heuristic K_c = " +
                       std::to_string(rf::cluster_size(cfg.alpha_r, cfg.epsilon)) +
                       ", using K_r = n_r / L_r = " + std::to_string(r.k_r));
    }
  }
  return r;
}

void ExperimentConfig::validate() const {
  if (n_r < 1) invalid("n_r must be >= 1");
  if (n_t < 1) invalid("n_t must be >= 1");
  if (!(alpha_r >= 0.0 && alpha_r < 1.0)) invalid("alpha_r must lie in [0, 1)");
  if (!(alpha_t >= 0.0 && alpha_t < 1.0)) invalid("alpha_t must lie in [0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) invalid("epsilon must lie in (0, 1)");
  if (trials < 1) invalid("trials must be >= 1");
  if (snr_grid_db.empty()) invalid("snr_grid_db must not be empty");
  for (double s : snr_grid_db) {
    if (!std::isfinite(s)) invalid("snr_grid_db entries must be finite");
  }
  if (schemes.empty()) invalid("schemes must not be empty");
  if (k && (*k < 1 || n_t % *k != 0)) {
    invalid("k = " + std::to_string(*k) + " does not divide n_t = " + std::to_string(n_t));
  }
  if (l_t && (*l_t < 1 || *l_t > n_t)) invalid("l_t must lie in [1, n_t]");
  if (l_r && (*l_r < 1 || *l_r > n_r)) invalid("l_r must lie in [1, n_r]");

  std::set<std::string> labels;
  for (const SchemeSpec& s : schemes) {
    const std::string label = s.label();
    if (!labels.insert(label).second) invalid("duplicate scheme " + label);
    if (s.rf == RfScheme::kFull && (s.k || s.l)) {
      invalid(label + ": the full RF stage takes no @k/@l override");
    }
    const Resolved r = resolve(*this, s);
    const bool clustered = s.rf == RfScheme::kColumnSpreader ||
                           s.rf == RfScheme::kSpreaderCombiner ||
                           s.rf == RfScheme::kPhaseAligned;
    if (clustered && r.k == 0) {
      invalid(label + ": L = " + std::to_string(r.l) + " does not divide n_t = " +
              std::to_string(n_t));
    }
    if (s.rf == RfScheme::kSpreaderCombiner && r.k_r == 0) {
      invalid(label + ": L_r = " + std::to_string(r.l_r) + " does not divide n_r = " +
              std::to_string(n_r));
    }
    const int receive_dim = is_two_sided(s.rf) ? r.l_r : n_r;
    if (needs_full_rank_receive(s.baseband) && r.l > receive_dim) {
      invalid(label + ": " + std::to_string(r.l) + " streams exceed the " +
              std::to_string(receive_dim) + " receive dimensions");
    }
  }
}

int default_worker_count() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SweepResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();

  SweepResult result;
  SharedModel model;
  model.r_t = channel::correlation_matrix({cfg.alpha_t, cfg.n_t});
  model.sqrt_r_t = linalg::principal_sqrt(model.r_t);
  model.sqrt_r_r =
      linalg::principal_sqrt(channel::correlation_matrix({cfg.alpha_r, cfg.n_r}));

  std::vector<SchemeContext> contexts;
  contexts.reserve(cfg.schemes.size());
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i) {
    contexts.push_back(build_context(cfg, cfg.schemes[i], i, model, result.notes));
  }
  result.notes.push_back("all schemes share each trial's channel draw (paired comparison)");

  std::vector<double> powers;
  for (double s : cfg.snr_grid_db) powers.push_back(std::pow(10.0, s / 10.0));

  const std::size_t n_snr = powers.size();
  const std::size_t cells = contexts.size() * n_snr;
  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<double> rates(trials * cells);

  auto run_trial = [&](std::size_t t) {
    RandomStream stream(cfg.master_seed, t, StreamPurpose::kChannel);
    const CMat g = channel::sample_iid(cfg.n_r, cfg.n_t, stream);
    const CMat h = channel::apply_kronecker(model.sqrt_r_r, model.sqrt_r_t, g);
    for (std::size_t s = 0; s < contexts.size(); ++s) {
      const std::vector<double> r = evaluate(contexts[s], h, model, powers);
      std::copy(r.begin(), r.end(), rates.begin() + t * cells + s * n_snr);
    }
  };

  const int requested = opts.workers > 0 ? opts.workers : default_worker_count();
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(requested), trials);
  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < trials && !failed; t = next++) {
          try {
            run_trial(t);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
  }

  // Reduce in trial order so the sums are identical for any worker count.
  for (std::size_t s = 0; s < contexts.size(); ++s) {
    const SchemeContext& ctx = contexts[s];
    for (std::size_t j = 0; j < n_snr; ++j) {
      const std::size_t cell = s * n_snr + j;
      double sum = 0.0;
      bool constant = true;
      for (std::size_t t = 0; t < trials; ++t) {
        sum += rates[t * cells + cell];
        constant = constant && rates[t * cells + cell] == rates[cell];
      }
      // A deterministic scheme should report its value exactly, not a
      // rounded average.
      const double mean = constant ? rates[cell] : sum / static_cast<double>(trials);
      double ss = 0.0;
      for (std::size_t t = 0; t < trials; ++t) {
        const double d = rates[t * cells + cell] - mean;
        ss += d * d;
      }
      SweepRow row;
      row.scheme = ctx.label;
      row.snr_db = cfg.snr_grid_db[j];
      row.trials = cfg.trials;
      row.mean_rate = mean;
      row.std_err = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1) /
                                           static_cast<double>(trials))
                               : 0.0;
      row.k = ctx.res.k;
      row.l = ctx.res.l;
      row.dft_columns = ctx.dft_columns;
      row.seed = cfg.master_seed;
      if (opts.verbose) {
        row.per_trial.reserve(trials);
        for (std::size_t t = 0; t < trials; ++t) row.per_trial.push_back(rates[t * cells + cell]);
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

}  // namespace hybridbf::harness
