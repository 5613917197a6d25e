#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hybridbf/error.hpp"
#include "hybridbf/harness.hpp"

namespace hybridbf::harness {

namespace {

constexpr std::string_view kHeader = "scheme,snr_db,trials,mean_rate_bps_hz,std_err,k,l,seed";

// Shortest decimal form that parses back to the same double.
std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kIoError, "line " + std::to_string(line) + ": bad number '" +
                                         std::string(field) + "'");
  }
  return value;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write to " + path.string() + " failed");
}

}  // namespace

std::string format_csv(const SweepResult& result) {
  std::string out(kHeader);
  out += '\n';
  for (const SweepRow& r : result.rows) {
    out += r.scheme;
    out += ',' + fmt(r.snr_db);
    out += ',' + std::to_string(r.trials);
    out += ',' + fmt(r.mean_rate);
    out += ',' + fmt(r.std_err);
    out += ',' + std::to_string(r.k);
    out += ',' + std::to_string(r.l);
    out += ',' + std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  write_file(path, format_csv(result));
}

SweepResult parse_csv(std::string_view text) {
  SweepResult result;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kHeader) throw Error(ErrorCode::kIoError, "unexpected CSV header");
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string_view> f;
    while (true) {
      const auto comma = line.find(',');
      f.push_back(line.substr(0, comma));
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (f.size() != 8) {
      throw Error(ErrorCode::kIoError, "line " + std::to_string(line_no) + ": expected 8 fields");
    }
    SweepRow r;
    r.scheme = std::string(f[0]);
    r.snr_db = parse_number<double>(f[1], line_no);
    r.trials = parse_number<int>(f[2], line_no);
    r.mean_rate = parse_number<double>(f[3], line_no);
    r.std_err = parse_number<double>(f[4], line_no);
    r.k = parse_number<int>(f[5], line_no);
    r.l = parse_number<int>(f[6], line_no);
    r.seed = parse_number<std::uint64_t>(f[7], line_no);
    result.rows.push_back(std::move(r));
  }
  if (line_no == 0) throw Error(ErrorCode::kIoError, "empty CSV");
  return result;
}

SweepResult read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

void emit_trials_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::string out = "scheme,snr_db,trial,rate_bps_hz\n";
  for (const SweepRow& r : result.rows) {
    for (std::size_t t = 0; t < r.per_trial.size(); ++t) {
      out += r.scheme + ',' + fmt(r.snr_db) + ',' + std::to_string(t) + ',' +
             fmt(r.per_trial[t]) + '\n';
    }
  }
  write_file(path, out);
}

void emit_metadata(const ExperimentConfig& cfg, const SweepResult& result,
                   const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["n_r"] = cfg.n_r;
  j["n_t"] = cfg.n_t;
  j["alpha_r"] = cfg.alpha_r;
  j["alpha_t"] = cfg.alpha_t;
  j["epsilon"] = cfg.epsilon;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["snr_grid_db"] = cfg.snr_grid_db;
  j["paired_trials"] = true;
  nlohmann::ordered_json schemes = nlohmann::ordered_json::array();
  for (const SchemeSpec& s : cfg.schemes) {
    const Resolved r = resolve(cfg, s);
    nlohmann::ordered_json entry{{"label", s.label()}, {"k", r.k}, {"l", r.l}};
    if (is_two_sided(s.rf)) {
      entry["k_r"] = r.k_r;
      entry["l_r"] = r.l_r;
    }
    for (const SweepRow& row : result.rows) {
      if (row.scheme == entry["label"] && !row.dft_columns.empty()) {
        entry["dft_columns"] = row.dft_columns;
        break;
      }
    }
    schemes.push_back(std::move(entry));
  }
  j["schemes"] = std::move(schemes);
  j["notes"] = result.notes;
  write_file(path, j.dump(2) + "\n");
}

}  // namespace hybridbf::harness
