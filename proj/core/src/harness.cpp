#include "hamsync/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "hamsync/errors.hpp"
#include "hamsync/gf2codes.hpp"
#include "hamsync/hashing.hpp"
#include "hamsync/syncdet.hpp"
#include "hamsync/tcp.hpp"

namespace hamsync::harness {

namespace {

constexpr double kExhaustiveLimit = 1e6;

std::string format_double(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  return buf;
}

std::string format_alpha(const Rational& alpha) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", alpha.to_double());
  return buf;
}

/// splitmix64, used to derive independent per-trial seeds.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool is_pair_protocol(const std::string& p) { return p != "nba" && p != "multinba"; }

double exhaustive_size(std::size_t n, std::size_t r) {
  return std::ldexp(1.0, static_cast<int>(n)) * std::pow(2.0, log2_ball_volume(std::min(r, n), n));
}

}  // namespace

TransportKind parse_transport(std::string_view text) {
  if (text == "loopback") return TransportKind::Loopback;
  if (text == "tcp") return TransportKind::Tcp;
  throw ConfigError("unknown transport '" + std::string(text) + "' (expected loopback|tcp)");
}

ReportFormat parse_format(std::string_view text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  throw ConfigError("unknown format '" + std::string(text) + "' (expected csv|json)");
}

const std::vector<std::string>& protocol_names() {
  static const std::vector<std::string> names{"naive",   "brute", "syndrome", "listdec", "coloring",
                                              "oneround", "smith", "nba",      "multinba"};
  return names;
}

void ExperimentConfig::validate() const {
  if (protocols.empty()) throw ConfigError("no protocol given");
  for (const auto& p : protocols) {
    const auto& names = protocol_names();
    if (std::find(names.begin(), names.end(), p) == names.end()) {
      throw ConfigError("unknown protocol '" + p + "'");
    }
  }
  if (ns.empty() || alphas.empty()) throw ConfigError("n and alpha lists must be non-empty");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (candidates < 1) throw ConfigError("candidate count must be at least 1");
  if (words < 1) throw ConfigError("word count must be at least 1");
  if (oversampling < 2) throw ConfigError("oversampling factor must be at least 2");
  for (std::size_t n : ns) {
    if (n < 1 || n > Word::kMaxBits) throw ConfigError("n out of range");
    for (const auto& alpha : alphas) {
      if (Rational(1, 2) < alpha) throw ConfigError("alpha must not exceed 1/2");
      const Bounds bounds(alpha, n);
      const std::size_t r = bounds.radius();
      for (const auto& p : protocols) {
        if (p == "listdec" || p == "oneround") {
          if (n > gf2::kMaxEnumerationLength) throw ConfigError(p + " decodes exhaustively: n must be <= 24");
          if (code_dim && (*code_dim < 1 || *code_dim >= n)) throw ConfigError("code dimension must lie in [1, n-1]");
        }
        if (p == "coloring" && n > syncdet::kMaxColoringLength) throw ConfigError("coloring needs n <= 16");
        if (p == "smith") prob.validate(bounds);
        if (p == "nba" || p == "multinba") {
          if (n < 64 && candidates > (std::uint64_t{1} << n)) throw ConfigError("more candidates than words of length n");
        }
        if (exhaustive) {
          if (!is_pair_protocol(p)) throw ConfigError("exhaustive mode applies to (X, Y) protocols only");
          if (exhaustive_size(n, r) > kExhaustiveLimit) {
            throw ConfigError("exhaustive mode needs 2^n Vol(r, n) <= 10^6");
          }
        }
      }
    }
  }
}

namespace {

/// A random code of length `length` whose unique decoder reaches `radius`,
/// with the smallest redundancy found. `dimension` fixed when nonzero
/// (brute construction), otherwise searched downward.
syncdet::DecodingCode find_decoding_code(std::size_t length, std::size_t dimension, std::size_t radius, Rng& rng) {
  constexpr double kBallLimit = 4e6;
  if (std::pow(2.0, log2_ball_volume(std::min(radius, length), length)) > kBallLimit) {
    throw ConfigError("syndrome table for radius " + std::to_string(radius) + " is too large");
  }
  for (std::size_t redundancy = 1; redundancy <= 64; ++redundancy) {
    const std::size_t n = dimension == 0 ? length : dimension + redundancy;
    const std::size_t k = n - redundancy;
    if (k < 1 || n > length + 64) break;
    // Need 2^redundancy >= Vol(radius, n) for distinct syndromes.
    if (static_cast<double>(redundancy) < log2_ball_volume(std::min(radius, n), n)) continue;
    for (int attempt = 0; attempt < 20; ++attempt) {
      auto code = gf2::random_linear_code(n, k, rng);
      try {
        return syncdet::DecodingCode::make(std::move(code), radius);
      } catch (const CapabilityError&) {
      }
    }
  }
  throw ConfigError("no random code found that uniquely decodes radius " + std::to_string(radius));
}

std::size_t default_list_dim(std::size_t n, std::size_t r) {
  const auto needed = static_cast<std::size_t>(std::ceil(log2_ball_volume(r, n)));
  if (needed >= n) return 1;
  return std::clamp<std::size_t>(n - needed, 1, n - 1);
}

struct TrialResult {
  std::size_t bits = 0;
  std::size_t rounds = 0;
  bool success = false;
  bool detected = false;
  bool undetected = false;
  Diagnostics diagnostics;
};

/// Everything precomputed once per row.
struct Setup {
  std::string protocol;
  Bounds bounds;
  const ExperimentConfig* config = nullptr;
  syncdet::DecodingCode decoding;
  std::shared_ptr<const gf2::LinearCode> list_code;
  std::shared_ptr<const syncdet::ColoringTable> coloring;
  Diagnostics fixed;
};

Setup make_setup(const std::string& protocol, const Bounds& bounds, const ExperimentConfig& config) {
  Setup setup{protocol, bounds, &config, {}, {}, {}, {}};
  const std::size_t n = bounds.n;
  const std::size_t r = bounds.radius();
  Rng rng(mix(config.seed ^ 0x5e70u));
  setup.fixed["radius"] = std::to_string(r);
  if (protocol == "brute") {
    setup.decoding = (n == 4 && r <= 1) ? syncdet::DecodingCode::make(gf2::hamming_7_4(), 1)
                                        : find_decoding_code(n, n, r, rng);
    setup.fixed["code"] = "[" + std::to_string(setup.decoding.code->length()) + "," +
                          std::to_string(setup.decoding.code->dimension()) + "]";
  } else if (protocol == "syndrome") {
    setup.decoding = (n == 7 && r <= 1) ? syncdet::DecodingCode::make(gf2::hamming_7_4(), 1)
                                        : find_decoding_code(n, 0, r, rng);
    setup.fixed["code"] = "[" + std::to_string(setup.decoding.code->length()) + "," +
                          std::to_string(setup.decoding.code->dimension()) + "]";
  } else if (protocol == "listdec" || protocol == "oneround") {
    const std::size_t dim = config.code_dim.value_or(default_list_dim(n, r));
    setup.list_code = std::make_shared<const gf2::LinearCode>(gf2::random_linear_code(n, dim, rng));
    setup.fixed["code"] = "[" + std::to_string(n) + "," + std::to_string(dim) + "]";
    setup.fixed["list_cap"] = std::to_string(syncdet::list_size_cap(*setup.list_code, r));
  } else if (protocol == "coloring") {
    setup.coloring = syncdet::build_coloring(n, r);
  } else if (protocol == "smith") {
    setup.fixed["k"] = std::to_string(config.prob.k);
    setup.fixed["s"] = std::to_string(config.prob.s);
    setup.fixed["delta"] = format_alpha(config.prob.delta);
    setup.fixed["inner_dim"] = std::to_string(config.prob.inner_dim);
  }
  return setup;
}

TrialResult score(const ProtocolOutcome& outcome, const Word& expected) {
  TrialResult t;
  t.bits = outcome.transcript.total_bits();
  t.rounds = outcome.transcript.rounds();
  t.success = outcome.recovered && *outcome.recovered == expected;
  t.detected = outcome.reported_failure;
  t.undetected = outcome.recovered && *outcome.recovered != expected;
  t.diagnostics = outcome.diagnostics;
  return t;
}

TrialResult run_pair(const Setup& setup, const Word& x, const Word& y, Rng& rng, DuplexChannel& channel) {
  const auto& config = *setup.config;
  const std::size_t r = setup.bounds.radius();
  PartyPair parties;
  if (setup.protocol == "naive") {
    parties = syncdet::make_naive_parties(x, y);
  } else if (setup.protocol == "brute") {
    parties = syncdet::make_brute_parties(setup.decoding, x, y);
  } else if (setup.protocol == "syndrome") {
    parties = syncdet::make_syndrome_parties(setup.decoding, x, y);
  } else if (setup.protocol == "listdec") {
    parties = syncdet::make_listdec_parties(setup.list_code, r, x, y);
  } else if (setup.protocol == "coloring") {
    parties = syncdet::make_coloring_parties(setup.coloring, x, y);
  } else if (setup.protocol == "oneround") {
    parties = prob::make_one_round_parties(setup.list_code, r, config.oversampling, x, y, rng());
  } else if (setup.protocol == "smith") {
    const syncdet::SyncInstance instance(x, y, setup.bounds);
    return score(prob::composite_prob_sync(instance, config.prob, rng, &channel), x);
  } else {
    throw InvariantError("not a pair protocol: " + setup.protocol);
  }
  return score(run_protocol(parties, channel), x);
}

std::vector<Word> distinct_words(std::size_t count, std::size_t n, Rng& rng) {
  std::set<Word> seen;
  std::vector<Word> out;
  while (out.size() < count) {
    Word w = random_word(n, rng);
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

TrialResult run_candidates(const Setup& setup, Rng& rng, DuplexChannel& channel) {
  const auto& config = *setup.config;
  const std::size_t n = setup.bounds.n;
  auto candidates = distinct_words(config.candidates, n, rng);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  if (setup.protocol == "nba") {
    const Word x = candidates[pick(rng)];
    auto parties = hashing::make_nba_parties(x, candidates, candidates.size());
    return score(run_protocol(parties, channel), x);
  }
  std::vector<Word> xs;
  BitWriter joined;
  for (std::size_t i = 0; i < config.words; ++i) {
    xs.push_back(candidates[pick(rng)]);
    joined.put(xs.back());
  }
  auto parties = hashing::make_multi_nba_parties(xs, candidates, rng());
  return score(run_protocol(parties, channel), joined.finish());
}

std::unique_ptr<DuplexChannel> make_channel(TransportKind kind) {
  return kind == TransportKind::Tcp ? tcp_loopback_channel() : loopback_channel();
}

ReportRow run_row(const std::string& protocol, std::size_t n, const Rational& alpha, const ExperimentConfig& config) {
  const Bounds bounds(alpha, n);
  const std::size_t r = bounds.radius();
  const auto started = std::chrono::steady_clock::now();
  const Setup setup = make_setup(protocol, bounds, config);
  auto channel = make_channel(config.transport);

  std::vector<TrialResult> results;
  if (config.exhaustive) {
    Rng rng(mix(config.seed));
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
      const Word x = Word::from_uint(v, n);
      for_each_in_ball(x, r, [&](const Word& y) { results.push_back(run_pair(setup, x, y, rng, *channel)); });
    }
  } else {
    for (std::size_t t = 0; t < config.trials; ++t) {
      Rng rng(mix(config.seed + mix(t)));
      if (!is_pair_protocol(protocol)) {
        results.push_back(run_candidates(setup, rng, *channel));
        continue;
      }
      const Word x = random_word(n, rng);
      const Word y = random_word_within(x, r, rng);
      results.push_back(run_pair(setup, x, y, rng, *channel));
    }
  }

  ReportRow row;
  row.protocol = protocol;
  row.n = n;
  row.alpha = format_alpha(alpha);
  row.trials = results.size();
  double sum_bits = 0;
  std::size_t successes = 0;
  std::map<std::string, double> numeric_sum;
  std::map<std::string, std::string> text_value;
  std::map<std::string, std::size_t> numeric_count;
  for (const auto& t : results) {
    sum_bits += static_cast<double>(t.bits);
    row.max_bits = std::max(row.max_bits, t.bits);
    row.rounds = std::max(row.rounds, t.rounds);
    successes += t.success ? 1 : 0;
    row.detected_failures += t.detected ? 1 : 0;
    row.undetected_errors += t.undetected ? 1 : 0;
    for (const auto& [key, value] : t.diagnostics) {
      if (key == "failure" || key == "perm_a" || key == "perm_b" || key == "nba_modulus" || key == "modulus" ||
          key == "q" || key == "s") {
        continue;
      }
      char* end = nullptr;
      const double number = std::strtod(value.c_str(), &end);
      if (!value.empty() && end == value.c_str() + value.size()) {
        numeric_sum[key] += number;
        ++numeric_count[key];
      } else if (!text_value.contains(key)) {
        text_value[key] = value;
      }
    }
  }
  const double count = static_cast<double>(std::max<std::size_t>(results.size(), 1));
  row.mean_bits = std::round(sum_bits / count * 1000.0) / 1000.0;
  row.success_rate = std::round(static_cast<double>(successes) / count * 1e6) / 1e6;
  row.lower_bound_bits = std::round(lower_bound_bits(bounds) * 1000.0) / 1000.0;
  row.h2alpha_n = std::round(binary_entropy(std::min(1.0, 2.0 * alpha.to_double())) * static_cast<double>(n) * 1000.0) / 1000.0;

  std::map<std::string, std::string> diag(setup.fixed.begin(), setup.fixed.end());
  for (const auto& [key, sum] : numeric_sum) diag[key] = format_double(sum / static_cast<double>(numeric_count[key]), 3);
  for (const auto& [key, value] : text_value) diag.emplace(key, value);
  row.diagnostics.assign(diag.begin(), diag.end());

  if (config.timing) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    row.wall_time_ms = std::round(std::chrono::duration<double, std::milli>(elapsed).count() * 1000.0) / 1000.0;
  }
  return row;
}

}  // namespace

std::vector<ReportRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ReportRow> rows;
  for (const auto& protocol : config.protocols) {
    for (std::size_t n : config.ns) {
      for (const auto& alpha : config.alphas) rows.push_back(run_row(protocol, n, alpha, config));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> header{
      "protocol",          "n",                 "alpha",           "trials",    "mean_bits",
      "max_bits",          "rounds",            "success_rate",    "detected_failures",
      "undetected_errors", "lower_bound_bits", "h2alpha_n",       "wall_time_ms", "diagnostics"};
  return header;
}

namespace {

std::string join_diagnostics(const ReportRow& row) {
  std::string out;
  for (const auto& [key, value] : row.diagnostics) {
    if (!out.empty()) out += ';';
    out += key + "=" + value;
  }
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json to_json(const ReportRow& row) {
  nlohmann::ordered_json j;
  j["protocol"] = row.protocol;
  j["n"] = row.n;
  j["alpha"] = row.alpha;
  j["trials"] = row.trials;
  j["mean_bits"] = row.mean_bits;
  j["max_bits"] = row.max_bits;
  j["rounds"] = row.rounds;
  j["success_rate"] = row.success_rate;
  j["detected_failures"] = row.detected_failures;
  j["undetected_errors"] = row.undetected_errors;
  j["lower_bound_bits"] = row.lower_bound_bits;
  j["h2alpha_n"] = row.h2alpha_n;
  j["wall_time_ms"] = row.wall_time_ms;
  nlohmann::ordered_json diag = nlohmann::ordered_json::object();
  for (const auto& [key, value] : row.diagnostics) diag[key] = value;
  j["diagnostics"] = diag;
  return j;
}

}  // namespace

void emit_report(const std::vector<ReportRow>& rows, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto& row : rows) array.push_back(to_json(row));
    out << array.dump(2) << '\n';
    return;
  }
  const auto& header = csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    out << csv_field(row.protocol) << ',' << row.n << ',' << row.alpha << ',' << row.trials << ','
        << format_double(row.mean_bits, 3) << ',' << row.max_bits << ',' << row.rounds << ','
        << format_double(row.success_rate, 6) << ',' << row.detected_failures << ',' << row.undetected_errors << ','
        << format_double(row.lower_bound_bits, 3) << ',' << format_double(row.h2alpha_n, 3) << ','
        << format_double(row.wall_time_ms, 3) << ',' << csv_field(join_diagnostics(row)) << '\n';
  }
}

void emit_report(const std::vector<ReportRow>& rows, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  emit_report(rows, format, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<ReportRow> parse_json_report(std::string_view text) {
  const auto array = nlohmann::json::parse(text);
  if (!array.is_array()) throw ContractViolation("report JSON must be an array");
  std::vector<ReportRow> rows;
  for (const auto& j : array) {
    ReportRow row;
    row.protocol = j.at("protocol").get<std::string>();
    row.n = j.at("n").get<std::size_t>();
    row.alpha = j.at("alpha").get<std::string>();
    row.trials = j.at("trials").get<std::size_t>();
    row.mean_bits = j.at("mean_bits").get<double>();
    row.max_bits = j.at("max_bits").get<std::size_t>();
    row.rounds = j.at("rounds").get<std::size_t>();
    row.success_rate = j.at("success_rate").get<double>();
    row.detected_failures = j.at("detected_failures").get<std::size_t>();
    row.undetected_errors = j.at("undetected_errors").get<std::size_t>();
    row.lower_bound_bits = j.at("lower_bound_bits").get<double>();
    row.h2alpha_n = j.at("h2alpha_n").get<double>();
    row.wall_time_ms = j.at("wall_time_ms").get<double>();
    for (const auto& [key, value] : j.at("diagnostics").items()) row.diagnostics.emplace_back(key, value.get<std::string>());
    std::sort(row.diagnostics.begin(), row.diagnostics.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hamsync::harness
