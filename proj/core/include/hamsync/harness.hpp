#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamsync/bounds.hpp"
#include "hamsync/probproto.hpp"
#include "hamsync/transport.hpp"

namespace hamsync::harness {

enum class TransportKind { Loopback, Tcp };

TransportKind parse_transport(std::string_view text);

/// One report row per (protocol, n, alpha) combination.
struct ExperimentConfig {
  std::vector<std::string> protocols{"syndrome"};
  std::vector<std::size_t> ns{7};
  std::vector<Rational> alphas{Rational(1, 7)};
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  /// Enumerate every promise pair instead of sampling. Only for protocols
  /// on (X, Y) pairs, and only when 2^n Vol(r, n) <= 10^6.
  bool exhaustive = false;
  /// Dimension of the random code for listdec/oneround (default: the
  /// largest dimension leaving room for a list of radius-r syndromes).
  std::optional<std::size_t> code_dim;
  /// Oversampling factor a of the one-round protocol.
  std::size_t oversampling = 16;
  /// NBA: Bob's candidate count; multinba: candidates per Alice word.
  std::size_t candidates = 4;
  /// multinba: number of Alice words.
  std::size_t words = 4;
  prob::ProbParams prob;
  TransportKind transport = TransportKind::Loopback;
  /// Measure wall time; off by default so reports are byte-stable.
  bool timing = false;

  /// Throws ConfigError.
  void validate() const;
};

/// Protocol ids accepted by run_experiment.
const std::vector<std::string>& protocol_names();

struct ReportRow {
  std::string protocol;
  std::size_t n = 0;
  std::string alpha;
  std::size_t trials = 0;
  double mean_bits = 0;
  std::size_t max_bits = 0;
  std::size_t rounds = 0;
  double success_rate = 0;
  std::size_t detected_failures = 0;
  std::size_t undetected_errors = 0;
  double lower_bound_bits = 0;
  double h2alpha_n = 0;
  double wall_time_ms = 0;
  /// Sorted key=value pairs; numeric values are trial means.
  std::vector<std::pair<std::string, std::string>> diagnostics;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

std::vector<ReportRow> run_experiment(const ExperimentConfig& config);

/// Frozen CSV column order.
const std::vector<std::string>& csv_header();

enum class ReportFormat { Csv, Json };

ReportFormat parse_format(std::string_view text);

void emit_report(const std::vector<ReportRow>& rows, ReportFormat format, std::ostream& out);
/// Throws std::runtime_error naming the path on I/O failure.
void emit_report(const std::vector<ReportRow>& rows, ReportFormat format, const std::filesystem::path& path);

std::vector<ReportRow> parse_json_report(std::string_view text);

}  // namespace hamsync::harness
