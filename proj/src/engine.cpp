#include "alc/engine.hpp"

#include "alc/receiver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace alc {

namespace {

enum class Stream : std::uint32_t { channel = 1, feedback = 2, scheme = 3, topology = 4, payload = 5 };

Rng substream(std::uint64_t seed, Stream s)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s)};
  return Rng{seq};
}

class Channel
{
public:
  Channel(const ChannelSpec& spec, Rng& channel_rng, Rng& topology_rng)
  {
    if (const auto* b = std::get_if<BernoulliParams>(&spec)) {
      model_ = *b;
    } else if (const auto* ge = std::get_if<GilbertElliottParams>(&spec)) {
      model_ = GilbertElliottChannel{*ge, channel_rng};
    } else {
      model_ = LoRaChannel{std::get<LoRaParams>(spec), topology_rng};
    }
  }

  bool transmit(Rng& rng)
  {
    return std::visit(
      [&rng](auto& m) -> bool {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BernoulliParams>) {
          return bernoulli_transmit(m.p_success, rng);
        } else if constexpr (std::is_same_v<M, GilbertElliottChannel>) {
          return m.step_and_transmit(rng);
        } else {
          return lora_transmit(m, rng);
        }
      },
      model_);
  }

private:
  std::variant<BernoulliParams, GilbertElliottChannel, LoRaChannel> model_;
};

std::int64_t combined_symbols(const Packet& pkt)
{
  std::int64_t total = 0;
  for (const auto& slot : pkt.slots) {
    if (const auto* c = std::get_if<Coded>(&slot)) {
      total += static_cast<std::int64_t>(c->degree());
    }
  }
  return total;
}

std::int64_t as_integer(std::string_view axis, double value)
{
  if (!std::isfinite(value) || std::floor(value) != value || std::abs(value) > 9e15) {
    throw std::invalid_argument("axis '" + std::string{axis} + "' needs an integer value");
  }
  return static_cast<std::int64_t>(value);
}

constexpr std::string_view known_axes[] = {
  "p_success", "p_gb", "p_bg", "p_feedback", "delta_max", "b", "l", "n_interferers",
  "interferer_tx_prob", "activity_scale", "blind_degree", "min_failures", "max_intervals",
};

template <typename Job>
void run_parallel(std::size_t count, unsigned threads, Job job)
{
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      job(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock{error_mutex};
          if (!error) {
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

} // namespace

std::string_view channel_name(const ChannelSpec& spec) noexcept
{
  switch (spec.index()) {
    case 0: return "bernoulli";
    case 1: return "gilbert_elliott";
    default: return "lora";
  }
}

void RunConfig::validate() const
{
  time.validate();
  if (!(p_feedback >= 0.0 && p_feedback <= 1.0)) {
    throw std::invalid_argument("p_feedback must be a probability in [0, 1]");
  }
  if (stop.min_failures < 1) {
    throw std::invalid_argument("min_failures must be at least 1");
  }
  if (stop.max_intervals < 1) {
    throw std::invalid_argument("max_intervals must be at least 1");
  }
  if (blind.degree < 0 || blind.degree > time.delta_max) {
    throw std::invalid_argument("blind_degree must be in [1, delta_max] (0 selects delta_max/2)");
  }
  std::visit(
    [](const auto& ch) {
      using C = std::decay_t<decltype(ch)>;
      if constexpr (std::is_same_v<C, BernoulliParams>) {
        if (!(ch.p_success >= 0.0 && ch.p_success <= 1.0)) {
          throw std::invalid_argument("p_success must be a probability in [0, 1]");
        }
      } else {
        ch.validate();
      }
    },
    channel);
}

SymbolSource payload_source(const RunConfig& cfg)
{
  return SymbolSource{substream(cfg.seed, Stream::payload)(), cfg.time.l};
}

RunMetrics run(const RunConfig& cfg, const PacketObserver& observer)
{
  cfg.validate();

  Rng channel_rng = substream(cfg.seed, Stream::channel);
  Rng feedback_rng = substream(cfg.seed, Stream::feedback);
  Rng scheme_rng = substream(cfg.seed, Stream::scheme);
  Rng topology_rng = substream(cfg.seed, Stream::topology);
  const SymbolSource source = payload_source(cfg);
  const DegreeTable table = build_table(std::max<std::int64_t>(2, cfg.time.delta_max));

  Channel channel{cfg.channel, channel_rng, topology_rng};
  Receiver receiver{cfg.time, cfg.verify_payloads ? &source : nullptr};
  auto sender = make_sender(cfg.scheme, cfg.time, table, source, scheme_rng, cfg.blind);

  RunMetrics m;
  m.scheme = std::string{to_string(cfg.scheme)};
  m.channel = std::string{channel_name(cfg.channel)};
  m.seed = cfg.seed;
  m.b = cfg.time.b;
  m.delta_max = cfg.time.delta_max;
  m.p_feedback = cfg.p_feedback;
  m.steady_min_combined = std::numeric_limits<std::int64_t>::max();
  m.steady_max_combined = std::numeric_limits<std::int64_t>::min();

  std::optional<Feedback> feedback;
  SymbolId now = 0;
  for (;; ++now) {
    receiver.expire_and_count(now);
    if (receiver.failure_count() >= cfg.stop.min_failures) {
      break;
    }
    if (now >= cfg.stop.max_intervals) {
      m.hit_cap = true;
      break;
    }

    sender->observe_feedback(now, feedback);
    const Packet pkt = sender->build_packet(now);

    const std::int64_t combined = combined_symbols(pkt);
    m.symbols_combined_total += combined;
    m.xor_ops_total += combined - static_cast<std::int64_t>(pkt.coded_count());
    if (now >= cfg.time.delta_max) {
      m.steady_min_combined = std::min(m.steady_min_combined, combined);
      m.steady_max_combined = std::max(m.steady_max_combined, combined);
    }

    const bool delivered = channel.transmit(channel_rng);
    if (delivered) {
      receiver.process_packet(pkt, now);
      ++m.packets_received;
    }
    if (observer) {
      observer(pkt, delivered);
    }
    const Feedback fb = receiver.make_feedback(delivered, now, now);
    feedback = feedback_arrives(cfg.p_feedback, feedback_rng) ? std::optional{fb} : std::nullopt;
  }

  // drain: adjudicate every generated symbol
  const SymbolId generated = now;
  for (SymbolId t = generated; t < generated + cfg.time.delta_max; ++t) {
    receiver.expire_and_count(t);
  }

  m.generated = generated;
  m.packets_sent = generated;
  m.failures = receiver.failure_count();
  m.delivered = receiver.delivered_count();
  m.dfr = generated > 0 ? static_cast<double>(m.failures) / static_cast<double>(generated) : 0.0;
  if (m.packets_sent > 0) {
    m.avg_xors_per_packet = static_cast<double>(m.xor_ops_total) / static_cast<double>(m.packets_sent);
    m.avg_symbols_combined_per_packet =
      static_cast<double>(m.symbols_combined_total) / static_cast<double>(m.packets_sent);
  }
  if (m.steady_min_combined > m.steady_max_combined) {
    m.steady_min_combined = m.steady_max_combined = 0;
  }
  m.intervals_run = generated + cfg.time.delta_max;
  return m;
}

bool is_known_axis(std::string_view axis) noexcept
{
  return std::find(std::begin(known_axes), std::end(known_axes), axis) != std::end(known_axes);
}

void apply_axis(RunConfig& cfg, std::string_view axis, double value)
{
  auto channel_field = [&](auto member_ptr, auto* params) {
    if (params == nullptr) {
      throw std::invalid_argument("axis '" + std::string{axis} + "' does not apply to channel " +
                                  std::string{channel_name(cfg.channel)});
    }
    params->*member_ptr = value;
  };

  if (axis == "p_success") {
    channel_field(&BernoulliParams::p_success, std::get_if<BernoulliParams>(&cfg.channel));
  } else if (axis == "p_gb") {
    channel_field(&GilbertElliottParams::p_gb, std::get_if<GilbertElliottParams>(&cfg.channel));
  } else if (axis == "p_bg") {
    channel_field(&GilbertElliottParams::p_bg, std::get_if<GilbertElliottParams>(&cfg.channel));
  } else if (axis == "interferer_tx_prob") {
    channel_field(&LoRaParams::interferer_tx_prob, std::get_if<LoRaParams>(&cfg.channel));
  } else if (axis == "activity_scale") {
    channel_field(&LoRaParams::activity_scale, std::get_if<LoRaParams>(&cfg.channel));
  } else if (axis == "n_interferers") {
    auto* lora = std::get_if<LoRaParams>(&cfg.channel);
    if (lora == nullptr) {
      throw std::invalid_argument("axis 'n_interferers' applies only to the lora channel");
    }
    lora->n_interferers = as_integer(axis, value);
  } else if (axis == "p_feedback") {
    cfg.p_feedback = value;
  } else if (axis == "delta_max") {
    cfg.time.delta_max = as_integer(axis, value);
  } else if (axis == "b") {
    cfg.time.b = as_integer(axis, value);
  } else if (axis == "l") {
    cfg.time.l = as_integer(axis, value);
  } else if (axis == "blind_degree") {
    cfg.blind.degree = as_integer(axis, value);
  } else if (axis == "min_failures") {
    cfg.stop.min_failures = as_integer(axis, value);
  } else if (axis == "max_intervals") {
    cfg.stop.max_intervals = as_integer(axis, value);
  } else {
    throw std::invalid_argument("unknown sweep axis '" + std::string{axis} + "'");
  }
}

std::vector<RunMetrics> sweep(const RunConfig& base, std::string_view axis, std::span<const double> values,
                              std::int64_t replicates, unsigned threads)
{
  if (replicates < 1) {
    throw std::invalid_argument("replicates must be at least 1");
  }
  std::vector<RunConfig> configs;
  std::vector<std::pair<double, std::int64_t>> tags;
  for (double v : values) {
    for (std::int64_t r = 0; r < replicates; ++r) {
      RunConfig cfg = base;
      apply_axis(cfg, axis, v);
      cfg.seed = base.seed + static_cast<std::uint64_t>(r);
      cfg.validate();
      configs.push_back(cfg);
      tags.emplace_back(v, r);
    }
  }
  std::vector<RunMetrics> results(configs.size());
  run_parallel(configs.size(), threads, [&](std::size_t i) {
    results[i] = run(configs[i]);
    results[i].axis_value = tags[i].first;
    results[i].replicate = tags[i].second;
  });
  return results;
}

std::vector<RunMetrics> replicate_runs(const RunConfig& base, std::int64_t replicates, unsigned threads)
{
  if (replicates < 1) {
    throw std::invalid_argument("replicates must be at least 1");
  }
  base.validate();
  std::vector<RunMetrics> results(static_cast<std::size_t>(replicates));
  run_parallel(results.size(), threads, [&](std::size_t i) {
    RunConfig cfg = base;
    cfg.seed = base.seed + i;
    results[i] = run(cfg);
    results[i].replicate = static_cast<std::int64_t>(i);
  });
  return results;
}

} // namespace alc
