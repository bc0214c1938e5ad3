#pragma once

#include "alc/engine.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alc {

/// Malformed experiment file. The message carries the line number when known.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Experiment description. Text form is `key = value` lines, `#` comments,
/// and one `[channel]` section holding `type` plus the channel parameters.
struct ExperimentFile
{
  RunConfig base;                   ///< base.scheme is ignored; see schemes
  std::vector<SchemeKind> schemes;  ///< at least one; runs are grouped by scheme
  std::optional<std::string> axis;
  std::vector<double> values;
  std::int64_t replicates = 1;
  std::string output;  ///< empty: standard output

  friend bool operator==(const ExperimentFile&, const ExperimentFile&) = default;
};

/// Throws ConfigError on syntax errors, unknown or duplicate keys, unknown
/// scheme or channel names, and on values RunConfig::validate rejects.
ExperimentFile parse_experiment(std::string_view text);
ExperimentFile load_experiment(const std::filesystem::path& path);

std::string serialize_experiment(const ExperimentFile& exp);

/// Runs every scheme; with `as_sweep` each scheme is swept over the axis
/// (the file must name one), otherwise the base config is replicated.
std::vector<RunMetrics> run_experiment(const ExperimentFile& exp, bool as_sweep, unsigned threads = 1);

/// Shortest round-tripping decimal without exponent.
std::string format_decimal(double value);

inline constexpr std::string_view csv_header =
  "scheme,channel,axis_value,replicate,seed,b,delta_max,p_feedback,generated,failures,dfr,"
  "packets_sent,symbols_combined_total,xor_ops_total,avg_xors_per_packet,intervals_run";

void write_csv(std::ostream& out, std::span<const RunMetrics> results);

/// Writes header plus one row per run. Throws std::invalid_argument for an
/// empty result list and std::runtime_error if the file cannot be written.
void emit_results(std::span<const RunMetrics> results, const std::filesystem::path& path);

} // namespace alc
