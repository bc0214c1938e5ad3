#pragma once

#include "alc/core.hpp"
#include "alc/degree.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string_view>

namespace alc {

enum class SchemeKind { windowed, selective, repetition, blind };

std::string_view to_string(SchemeKind kind) noexcept;
/// Throws std::invalid_argument for unknown names.
SchemeKind parse_scheme(std::string_view name);

/// Feedback (u, beta) after discounting a u that has expired since the
/// receiver produced it. beta == 0 means nothing is known to be missing.
struct FeedbackAnchor
{
  SymbolId u = 0;
  std::int64_t beta = 0;
};

struct WindowedState
{
  std::optional<Feedback> last_fb;
  bool fb_fresh = false;  ///< feedback arrived for the previous packet
  SymbolId u_l = 0;       ///< u from the most recent feedback; never decreases

  void observe_feedback(SymbolId now, const std::optional<Feedback>& fb);
};

struct SelectiveState
{
  std::set<SymbolId> unacked;                           ///< unexpired, unacknowledged, >= u_l
  std::map<SymbolId, std::vector<SymbolId>> sent_contents;  ///< packet seq -> uncoded ids
  std::optional<Feedback> last_fb;
  bool fb_fresh = false;
  SymbolId u_l = 0;
};

struct BlindConfig
{
  std::int64_t degree = 0;  ///< 0 selects delta_max / 2

  std::int64_t resolved(const TimeConfig& cfg) const noexcept
  {
    if (degree > 0) {
      return degree;
    }
    return cfg.delta_max / 2 > 0 ? cfg.delta_max / 2 : 1;
  }

  friend bool operator==(const BlindConfig&, const BlindConfig&) = default;
};

/// Draws min(d, pool.size()) distinct entries uniformly without replacement.
std::vector<SymbolId> draw_subset(std::span<const SymbolId> pool, std::int64_t d, Rng& rng);

FeedbackAnchor window_anchor(const Feedback& fb, SymbolId now, const TimeConfig& cfg);

Packet windowed_build(const WindowedState& state, SymbolId now, const TimeConfig& cfg,
                      const DegreeTable& table, const SymbolSource& src, Rng& rng);

void selective_observe_feedback(SelectiveState& state, SymbolId now, const std::optional<Feedback>& fb,
                                const TimeConfig& cfg);

/// Builds p_now and then records s_now as unacknowledged.
Packet selective_build(SelectiveState& state, SymbolId now, const TimeConfig& cfg,
                       const DegreeTable& table, const SymbolSource& src, Rng& rng);

/// Feedback-driven retransmission without coding. Shares the selective
/// bookkeeping (call selective_observe_feedback before each build).
Packet repetition_build(SelectiveState& state, SymbolId now, const TimeConfig& cfg, const SymbolSource& src);

Packet blind_build(SymbolId now, const TimeConfig& cfg, const BlindConfig& blind, const SymbolSource& src,
                   Rng& rng);

/// Per-interval sender contract: observe_feedback(now, ...) for the previous
/// packet, then build_packet(now), once each per interval.
class Sender
{
public:
  virtual ~Sender() = default;

  virtual void observe_feedback(SymbolId now, const std::optional<Feedback>& fb) = 0;
  virtual Packet build_packet(SymbolId now) = 0;
};

/// `table`, `src` and `rng` must outlive the sender.
std::unique_ptr<Sender> make_sender(SchemeKind kind, const TimeConfig& cfg, const DegreeTable& table,
                                    const SymbolSource& src, Rng& rng, BlindConfig blind = {});

} // namespace alc
