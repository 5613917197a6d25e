#include "hybridbf/scheme.hpp"

#include <array>
#include <charconv>
#include <string>
#include <utility>

#include "hybridbf/error.hpp"

namespace hybridbf::harness {

namespace {

constexpr std::array<std::pair<RfScheme, std::string_view>, 7> kRfNames{{
    {RfScheme::kFull, "full"},
    {RfScheme::kColumnSpreader, "cs"},
    {RfScheme::kDft, "dft"},
    {RfScheme::kSelection, "sel"},
    {RfScheme::kPhaseAligned, "pa"},
    {RfScheme::kSpreaderCombiner, "cs-rc"},
    {RfScheme::kDftBoth, "dft-dft"},
}};

constexpr std::array<std::pair<BasebandScheme, std::string_view>, 8> kBbNames{{
    {BasebandScheme::kCapacity, "capacity"},
    {BasebandScheme::kCsit, "csit"},
    {BasebandScheme::kClosedZf, "closed-zf"},
    {BasebandScheme::kClosedMf, "closed-mf"},
    {BasebandScheme::kEvdZf, "evd-zf"},
    {BasebandScheme::kEvdMf, "evd-mf"},
    {BasebandScheme::kMatchedFilter, "mf"},
    {BasebandScheme::kClosedFormRate, "closed-rate"},
}};

constexpr std::array<std::pair<PowerPolicy, std::string_view>, 2> kPowerNames{{
    {PowerPolicy::kWaterfill, "wf"},
    {PowerPolicy::kEqual, "eq"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& table,
                         Enum value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
Enum lookup(const std::array<std::pair<Enum, std::string_view>, N>& table,
            std::string_view token, std::string_view full, const char* what) {
  for (const auto& [e, name] : table) {
    if (name == token) return e;
  }
  throw Error(ErrorCode::kConfigInvalid, "scheme '" + std::string(full) + "': unknown " +
                                             what + " '" + std::string(token) + "'");
}

int parse_positive(std::string_view digits, std::string_view full) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || value < 1) {
    throw Error(ErrorCode::kConfigInvalid,
                "scheme '" + std::string(full) + "': bad integer '" + std::string(digits) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(RfScheme rf) { return name_of(kRfNames, rf); }
std::string_view to_string(BasebandScheme bb) { return name_of(kBbNames, bb); }
std::string_view to_string(PowerPolicy power) { return name_of(kPowerNames, power); }

bool is_two_sided(RfScheme rf) {
  return rf == RfScheme::kSpreaderCombiner || rf == RfScheme::kDftBoth;
}

std::string SchemeSpec::label() const {
  std::string out;
  out += to_string(rf);
  out += ':';
  out += to_string(baseband);
  out += ':';
  out += to_string(power);
  if (k) out += "@k=" + std::to_string(*k);
  if (l) out += "@l=" + std::to_string(*l);
  return out;
}

SchemeSpec parse_scheme(std::string_view text) {
  SchemeSpec spec;
  std::string_view body = text;
  const auto at = text.find('@');
  if (at != std::string_view::npos) {
    body = text.substr(0, at);
    const std::string_view suffix = text.substr(at + 1);
    if (suffix.size() < 3 || suffix[1] != '=') {
      throw Error(ErrorCode::kConfigInvalid,
                  "scheme '" + std::string(text) + "': expected @k=N or @l=N");
    }
    const int value = parse_positive(suffix.substr(2), text);
    if (suffix[0] == 'k') {
      spec.k = value;
    } else if (suffix[0] == 'l') {
      spec.l = value;
    } else {
      throw Error(ErrorCode::kConfigInvalid,
                  "scheme '" + std::string(text) + "': expected @k=N or @l=N");
    }
  }

  std::array<std::string_view, 3> parts{};
  std::size_t count = 0;
  while (true) {
    const auto colon = body.find(':');
    if (count == parts.size()) {
      throw Error(ErrorCode::kConfigInvalid, "scheme '" + std::string(text) + "': too many fields");
    }
    parts[count++] = body.substr(0, colon);
    if (colon == std::string_view::npos) break;
    body.remove_prefix(colon + 1);
  }
  if (count < 2) {
    throw Error(ErrorCode::kConfigInvalid,
                "scheme '" + std::string(text) + "': expected <rf>:<baseband>[:<power>]");
  }
  spec.rf = lookup(kRfNames, parts[0], text, "RF kind");
  spec.baseband = lookup(kBbNames, parts[1], text, "baseband kind");
  if (count == 3) spec.power = lookup(kPowerNames, parts[2], text, "power policy");
  return spec;
}

}  // namespace hybridbf::harness
