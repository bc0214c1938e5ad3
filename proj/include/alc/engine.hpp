#pragma once

#include "alc/channels.hpp"
#include "alc/core.hpp"
#include "alc/schemes.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace alc {

struct BernoulliParams
{
  double p_success = 1.0;

  friend bool operator==(const BernoulliParams&, const BernoulliParams&) = default;
};

using ChannelSpec = std::variant<BernoulliParams, GilbertElliottParams, LoRaParams>;

/// "bernoulli", "gilbert_elliott" or "lora".
std::string_view channel_name(const ChannelSpec& spec) noexcept;

struct StopRule
{
  std::int64_t min_failures = 100;
  std::int64_t max_intervals = 10'000'000;  ///< safety cap on transmitted packets

  friend bool operator==(const StopRule&, const StopRule&) = default;
};

struct RunConfig
{
  SchemeKind scheme = SchemeKind::windowed;
  ChannelSpec channel = BernoulliParams{};
  double p_feedback = 1.0;
  TimeConfig time;
  StopRule stop;
  std::uint64_t seed = 1;
  BlindConfig blind;
  bool verify_payloads = true;

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct RunMetrics
{
  // provenance
  std::string scheme;
  std::string channel;
  std::optional<double> axis_value;
  std::int64_t replicate = 0;
  std::uint64_t seed = 0;
  std::int64_t b = 0;
  std::int64_t delta_max = 0;
  double p_feedback = 0.0;

  // outcome; dfr's denominator is the set of symbols whose deadline was
  // adjudicated, which after the drain phase is every generated symbol
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t failures = 0;
  double dfr = 0.0;

  std::int64_t packets_sent = 0;
  std::int64_t packets_received = 0;
  std::int64_t symbols_combined_total = 0;  ///< sum of coded-slot degrees
  std::int64_t xor_ops_total = 0;           ///< sum of (degree - 1)
  double avg_xors_per_packet = 0.0;
  double avg_symbols_combined_per_packet = 0.0;

  /// Range of per-packet combined-symbol counts over packets p_i, i >= delta_max.
  std::int64_t steady_min_combined = 0;
  std::int64_t steady_max_combined = 0;

  std::int64_t intervals_run = 0;  ///< transmission intervals plus drain
  bool hit_cap = false;            ///< stopped by max_intervals, not min_failures
};

/// The payload generator a run with this config uses.
SymbolSource payload_source(const RunConfig& cfg);

/// Called once per transmitted packet with the channel outcome.
using PacketObserver = std::function<void(const Packet&, bool delivered)>;

/// One simulation run. Per interval i: expire/count at the receiver, sender
/// consumes the feedback outcome of i-1 and builds p_i, channel draw,
/// receiver processes p_i if it survived and emits feedback, feedback arrival
/// draw. Stops once failures >= min_failures or after max_intervals packets,
/// then runs delta_max expiry-only intervals so every symbol is adjudicated.
///
/// Channel, feedback, scheme and topology randomness come from independent
/// substreams of the seed.
RunMetrics run(const RunConfig& cfg, const PacketObserver& observer = {});

/// Sets a numeric field by name (p_success, p_gb, p_bg, p_feedback,
/// delta_max, b, l, n_interferers, interferer_tx_prob, activity_scale,
/// blind_degree, min_failures, max_intervals). Throws std::invalid_argument
/// for unknown names, names not applicable to the channel, or non-integral
/// values for integer fields.
void apply_axis(RunConfig& cfg, std::string_view axis, double value);

bool is_known_axis(std::string_view axis) noexcept;

/// One run per (value, replicate), seed = base.seed + replicate. Results are
/// ordered by value, then replicate, regardless of `threads`.
std::vector<RunMetrics> sweep(const RunConfig& base, std::string_view axis, std::span<const double> values,
                              std::int64_t replicates, unsigned threads = 1);

/// `replicates` runs of `base` without an axis.
std::vector<RunMetrics> replicate_runs(const RunConfig& base, std::int64_t replicates, unsigned threads = 1);

} // namespace alc
