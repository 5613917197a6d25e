#include "hybridbf/cli.hpp"

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridbf/error.hpp"
#include "hybridbf/harness.hpp"

namespace hybridbf::cli {

namespace {

struct Flags {
  std::optional<std::string> preset;
  double scale = 0.25;
  std::optional<int> n_r, n_t, k, l_t, l_r, trials, workers;
  std::optional<double> alpha_r, alpha_t, epsilon;
  std::vector<std::string> schemes;
  std::vector<double> snr_db;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool verbose = false;
};

void add_scenario_options(CLI::App& app, Flags& f) {
  app.add_option("--preset", f.preset, "Base scenario: fig3, fig4, fig5 or fig6");
  app.add_option("--scale", f.scale, "Array-size scale for --preset, in (0, 1]");
  app.add_option("--n-r", f.n_r, "Receive antennas");
  app.add_option("--n-t", f.n_t, "Transmit antennas");
  app.add_option("--alpha-r", f.alpha_r, "Receive correlation base in [0, 1)");
  app.add_option("--alpha-t", f.alpha_t, "Transmit correlation base in [0, 1)");
  app.add_option("--epsilon", f.epsilon, "Cluster-size threshold (default 0.1)");
  app.add_option("--scheme", f.schemes, "Scheme rf:baseband[:power][@k=N|@l=N]; repeatable");
  app.add_option("--snr-db", f.snr_db, "Transmit power grid in dB; repeatable");
  app.add_option("--k", f.k, "Transmit cluster size for every scheme");
  app.add_option("--l-t", f.l_t, "Transmit RF chains for every scheme");
  app.add_option("--l-r", f.l_r, "Receive RF chains for two-sided schemes");
  app.add_option("--trials", f.trials, "Monte Carlo trials");
  app.add_option("--seed", f.seed, "Master seed (64-bit)");
}

harness::ExperimentConfig build_config(const Flags& f) {
  harness::ExperimentConfig cfg;
  if (f.preset) cfg = harness::preset(*f.preset, f.scale);
  if (f.n_r) cfg.n_r = *f.n_r;
  if (f.n_t) cfg.n_t = *f.n_t;
  if (f.alpha_r) cfg.alpha_r = *f.alpha_r;
  if (f.alpha_t) cfg.alpha_t = *f.alpha_t;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (!f.schemes.empty()) {
    cfg.schemes.clear();
    for (const std::string& s : f.schemes) cfg.schemes.push_back(harness::parse_scheme(s));
  }
  if (!f.snr_db.empty()) cfg.snr_grid_db = f.snr_db;
  // An explicit chain count replaces a preset cluster size and vice versa.
  if (f.k) {
    cfg.k = *f.k;
    cfg.l_t.reset();
  }
  if (f.l_t) {
    cfg.l_t = *f.l_t;
    cfg.k.reset();
  }
  if (f.l_r) cfg.l_r = *f.l_r;
  if (f.trials) cfg.trials = *f.trials;
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.out) cfg.output_path = *f.out;
  return cfg;
}

std::string shortest(double x) {
  char buf[32];
  return std::string(buf, std::to_chars(buf, buf + sizeof buf, x).ptr);
}

std::string describe(const harness::ExperimentConfig& cfg) {
  std::string s;
  s += "n-r = " + std::to_string(cfg.n_r) + "\n";
  s += "n-t = " + std::to_string(cfg.n_t) + "\n";
  s += "alpha-r = " + shortest(cfg.alpha_r) + "\n";
  s += "alpha-t = " + shortest(cfg.alpha_t) + "\n";
  s += "epsilon = " + shortest(cfg.epsilon) + "\n";
  if (cfg.k) s += "k = " + std::to_string(*cfg.k) + "\n";
  if (cfg.l_t) s += "l-t = " + std::to_string(*cfg.l_t) + "\n";
  if (cfg.l_r) s += "l-r = " + std::to_string(*cfg.l_r) + "\n";
  s += "trials = " + std::to_string(cfg.trials) + "\n";
  s += "seed = " + std::to_string(cfg.master_seed) + "\n";
  s += "snr-db = [";
  for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
    s += (i ? ", " : "") + shortest(cfg.snr_grid_db[i]);
  }
  s += "]\nscheme = [";
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i) {
    s += (i ? ", \"" : "\"") + cfg.schemes[i].label() + "\"";
  }
  s += "]\n";
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid beamforming Monte Carlo sweeps"};
  app.require_subcommand(1);

  // Options live on the parent so the config file feeds them; subcommands
  // fall through to accept them after the subcommand name.
  Flags flags;
  app.set_config("--config", "", "Scenario file (key = value, lists in [ ])");
  add_scenario_options(app, flags);
  app.add_option("--out", flags.out, "CSV output path (stdout when omitted)");
  app.add_option("--workers", flags.workers,
                 std::string("Worker threads (default: $") + harness::kWorkersEnv +
                     " or hardware concurrency)");
  app.add_flag("--verbose", flags.verbose,
               "Log notes and write per-trial rates next to the CSV");

  auto* run_cmd = app.add_subcommand("run", "Run a sweep and write the rate table as CSV");
  run_cmd->fallthrough();
  auto* describe_cmd =
      app.add_subcommand("describe", "Print the resolved scenario as a config file");
  describe_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Also catches a missing or unreadable --config file.
    if (e.get_exit_code() == 0) return kExitOk;
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (describe_cmd->parsed()) {
      const harness::ExperimentConfig cfg = build_config(flags);
      cfg.validate();
      out << describe(cfg);
      return kExitOk;
    }

    const harness::ExperimentConfig cfg = build_config(flags);
    harness::RunOptions opts;
    opts.verbose = flags.verbose;
    if (flags.workers) {
      if (*flags.workers < 1) throw Error(ErrorCode::kConfigInvalid, "workers must be >= 1");
      opts.workers = *flags.workers;
    }
    const harness::SweepResult result = harness::run_experiment(cfg, opts);

    if (flags.verbose) {
      for (const std::string& note : result.notes) err << "note: " << note << "\n";
    }
    if (cfg.output_path.empty()) {
      out << harness::format_csv(result);
    } else {
      harness::emit_csv(result, cfg.output_path);
      harness::emit_metadata(cfg, result, cfg.output_path + ".meta.json");
      if (flags.verbose) harness::emit_trials_csv(result, cfg.output_path + ".trials.csv");
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool config_error =
        e.code() == ErrorCode::kConfigInvalid || e.code() == ErrorCode::kUnknownPreset;
    return config_error ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace hybridbf::cli
