#include <cmath>
#include <string>

#include "hybridbf/error.hpp"
#include "hybridbf/harness.hpp"

namespace hybridbf::harness {

namespace {

// round(n * scale) snapped to a positive multiple of `multiple`.
int scale_dim(int n, double scale, int multiple) {
  const long snapped = std::lround(n * scale / multiple) * multiple;
  return static_cast<int>(std::max<long>(multiple, snapped));
}

SchemeSpec scheme(std::string_view text) { return parse_scheme(text); }

std::string at_k(std::string_view base, int k) {
  return std::string(base) + "@k=" + std::to_string(k);
}

// 256 x 60 uplink, CS transmit filter with K = 3, receiver uncorrelated.
ExperimentConfig fig3(double s) {
  ExperimentConfig cfg;
  cfg.k = 3;
  cfg.n_r = scale_dim(256, s, 1);
  cfg.n_t = scale_dim(60, s, 3);
  cfg.alpha_t = 0.8;
  cfg.snr_grid_db = {0, 5, 10, 15, 20};
  cfg.schemes = {scheme("cs:csit:wf"), scheme("cs:closed-zf:wf"), scheme("cs:mf:wf")};
  return cfg;
}

// Closed-form rate against simulated precoding across cluster sizes, P = 20 dB.
ExperimentConfig fig4(double s) {
  ExperimentConfig cfg;
  cfg.n_r = scale_dim(512, s, 1);
  cfg.n_t = scale_dim(128, s, 16);
  cfg.alpha_t = 0.9;
  cfg.snr_grid_db = {20};
  for (int k : {2, 4, 8, 16, 32}) {
    if (k >= cfg.n_t || cfg.n_t % k != 0) continue;
    cfg.schemes.push_back(scheme(at_k("cs:closed-rate:wf", k)));
    cfg.schemes.push_back(scheme(at_k("cs:closed-mf:wf", k)));
    cfg.schemes.push_back(scheme(at_k("cs:evd-mf:wf", k)));
  }
  return cfg;
}

// High transmit correlation; CS vs random DFT at L_t = N_t/8, N_t/4, N_t/2.
ExperimentConfig fig5(double s) {
  ExperimentConfig cfg;
  cfg.n_r = scale_dim(256, s, 1);
  cfg.n_t = scale_dim(128, s, 8);
  cfg.alpha_t = 0.9;
  cfg.snr_grid_db = {0, 5, 10, 15, 20, 25, 30};
  for (int k : {8, 4, 2}) cfg.schemes.push_back(scheme(at_k("cs:capacity:wf", k)));
  for (int k : {8, 4, 2}) cfg.schemes.push_back(scheme(at_k("dft:capacity:wf", k)));
  cfg.schemes.push_back(scheme("full:capacity:wf"));
  return cfg;
}

// Both ends correlated and RF-limited with L_r = L_t.
ExperimentConfig fig6(double s) {
  ExperimentConfig cfg;
  cfg.n_r = scale_dim(256, s, 8);
  cfg.n_t = scale_dim(128, s, 4);
  cfg.alpha_t = 0.7;
  cfg.alpha_r = 0.7;
  cfg.snr_grid_db = {0, 5, 10, 15, 20, 25, 30};
  for (int k : {4, 2}) {
    cfg.schemes.push_back(scheme(at_k("cs-rc:capacity:wf", k)));
    cfg.schemes.push_back(scheme(at_k("dft-dft:capacity:wf", k)));
  }
  return cfg;
}

}  // namespace

ExperimentConfig preset(std::string_view name, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) {
    throw Error(ErrorCode::kConfigInvalid, "scale must lie in (0, 1]");
  }
  ExperimentConfig cfg;
  if (name == "fig3") {
    cfg = fig3(scale);
  } else if (name == "fig4") {
    cfg = fig4(scale);
  } else if (name == "fig5") {
    cfg = fig5(scale);
  } else if (name == "fig6") {
    cfg = fig6(scale);
  } else {
    throw Error(ErrorCode::kUnknownPreset, "no preset named '" + std::string(name) + "'");
  }
  cfg.trials = 500;
  return cfg;
}

}  // namespace hybridbf::harness
