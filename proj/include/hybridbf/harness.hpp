#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybridbf/scheme.hpp"

namespace hybridbf::harness {

// Declarative scenario. Array sizes, correlation bases and the SNR grid are
// shared by every scheme so that schemes are compared on the same draws.
struct ExperimentConfig {
  int n_r = 64;
  int n_t = 16;
  double alpha_r = 0.0;
  double alpha_t = 0.0;
  double epsilon = 0.1;
  std::vector<SchemeSpec> schemes;
  std::vector<double> snr_grid_db;
  std::optional<int> k;    // transmit cluster size override
  std::optional<int> l_t;  // transmit RF chains override
  std::optional<int> l_r;  // receive RF chains for two-sided schemes
  int trials = 500;
  std::uint64_t master_seed = 1;
  std::string output_path;

  // Field-level checks, including every divisibility rule the schemes need.
  // Throws ConfigInvalid before any trial runs.
  void validate() const;
};

// Cluster size / chain count actually used by one scheme.
struct Resolved {
  int k = 1;    // transmit cluster size (0 when L does not divide N_t)
  int l = 1;    // transmit RF chains
  int k_r = 1;  // receive cluster size (two-sided schemes)
  int l_r = 0;  // receive RF chains (0: full receiver)
};

Resolved resolve(const ExperimentConfig& cfg, const SchemeSpec& scheme,
                 std::vector<std::string>* notes = nullptr);

struct SweepRow {
  std::string scheme;
  double snr_db = 0.0;
  int trials = 0;
  double mean_rate = 0.0;  // bits/s/Hz
  double std_err = 0.0;
  int k = 0;
  int l = 0;
  std::vector<int> dft_columns;
  std::uint64_t seed = 0;
  std::vector<double> per_trial;  // filled in verbose mode only
};

struct SweepResult {
  std::vector<SweepRow> rows;  // scheme-major, then SNR grid order
  std::vector<std::string> notes;
};

struct RunOptions {
  int workers = 0;  // 0: HYBRIDBF_WORKERS or hardware concurrency
  bool verbose = false;
};

inline constexpr const char* kWorkersEnv = "HYBRIDBF_WORKERS";

int default_worker_count();

/// Seeded Monte Carlo sweep. Trial t draws its channel from substream
/// (master_seed, t); every scheme and SNR point in that trial reuses the
/// draw. Results are reduced in trial order, so output does not depend on
/// the worker count.
SweepResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Paper-scenario presets fig3..fig6 with array sizes scaled by `scale`.
ExperimentConfig preset(std::string_view name, double scale = 0.25);

// CSV header: scheme,snr_db,trials,mean_rate_bps_hz,std_err,k,l,seed
void emit_csv(const SweepResult& result, const std::filesystem::path& path);
std::string format_csv(const SweepResult& result);
// Parses what emit_csv writes (dft columns and per-trial values are not part
// of the CSV and come back empty).
SweepResult read_csv(const std::filesystem::path& path);
SweepResult parse_csv(std::string_view text);

// Per-trial values, one row per (scheme, snr, trial). Needs verbose results.
void emit_trials_csv(const SweepResult& result, const std::filesystem::path& path);

// JSON sidecar with the config, resolved K/L, DFT columns and notes.
void emit_metadata(const ExperimentConfig& cfg, const SweepResult& result,
                   const std::filesystem::path& path);

}  // namespace hybridbf::harness
