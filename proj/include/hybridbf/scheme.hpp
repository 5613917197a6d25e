#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace hybridbf::harness {

// RF stage. Two-sided kinds also limit the receiver with L_r = L_t.
enum class RfScheme {
  kFull,                // V_RF = I (L_t = N_t)
  kColumnSpreader,      // cs
  kDft,                 // dft: random DFT columns
  kSelection,           // sel: first antenna of every cluster
  kPhaseAligned,        // pa: co-phased spreader (needs CSI)
  kSpreaderCombiner,    // cs-rc: column spreader + receive row combiner
  kDftBoth,             // dft-dft: DFT projection on both sides
};

// Baseband stage, including the receive filter where one is needed.
enum class BasebandScheme {
  kCapacity,    // log2|I + H~ Q H~^H| with waterfilled Q
  kCsit,        // EVD of H~^H H~ precoder, matched filter receive
  kClosedZf,    // sine precoder (CCIT), zero-forcing receive
  kClosedMf,    // sine precoder (CCIT), matched filter receive
  kEvdZf,       // EVD of V_RF^H R_t V_RF (CCIT), zero-forcing receive
  kEvdMf,       // EVD of V_RF^H R_t V_RF (CCIT), matched filter receive
  kMatchedFilter,  // V_BB = I, matched filter, interference-free waterfilling
  kClosedFormRate,  // sum log2(1 + lambda_i p_i) with tridiagonal eigenvalues
};

enum class PowerPolicy { kWaterfill, kEqual };

// Text form: "<rf>:<baseband>[:<power>][@k=N|@l=N]", e.g. "cs:closed-zf:wf@k=8".
struct SchemeSpec {
  RfScheme rf = RfScheme::kColumnSpreader;
  BasebandScheme baseband = BasebandScheme::kCapacity;
  PowerPolicy power = PowerPolicy::kWaterfill;
  std::optional<int> k;
  std::optional<int> l;

  std::string label() const;
  bool operator==(const SchemeSpec&) const = default;
};

// Throws ConfigInvalid with the offending token.
SchemeSpec parse_scheme(std::string_view text);

std::string_view to_string(RfScheme rf);
std::string_view to_string(BasebandScheme bb);
std::string_view to_string(PowerPolicy power);

bool is_two_sided(RfScheme rf);

}  // namespace hybridbf::harness
