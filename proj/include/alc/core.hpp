#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace alc {

/// Sequence number of an information symbol. Symbol i is generated (and
/// packet i transmitted) in packet interval i, so the same integer also
/// names the interval and the packet.
using SymbolId = std::int64_t;

using Payload = std::vector<std::uint8_t>;

struct InfoSymbol
{
  SymbolId id = 0;
  Payload payload;
};

struct Uncoded
{
  SymbolId id = 0;
  Payload payload;
};

/// XOR of the payloads of every symbol in `ids`. `ids` is sorted and unique;
/// its size is the degree.
struct Coded
{
  std::vector<SymbolId> ids;
  Payload payload;

  std::size_t degree() const noexcept { return ids.size(); }
};

using PayloadSlot = std::variant<Uncoded, Coded>;

struct Packet
{
  SymbolId seq = 0;
  std::vector<PayloadSlot> slots;

  /// Ids carried uncoded, in slot order.
  std::vector<SymbolId> uncoded_ids() const;
  std::size_t coded_count() const noexcept;
};

/// Cumulative feedback record sent by the receiver after each interval.
struct Feedback
{
  bool ack = false;
  SymbolId u = 0;
  std::int64_t beta = 0;

  friend bool operator==(const Feedback&, const Feedback&) = default;
};

struct TimeConfig
{
  std::int64_t delta_max = 16;  ///< delay tolerance in packet intervals
  std::int64_t b = 2;           ///< symbols per packet
  std::int64_t l = 1;           ///< bytes per symbol

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;

  friend bool operator==(const TimeConfig&, const TimeConfig&) = default;
};

/// Upper bound on delta_max; keeps binomial arithmetic in 64 bits.
inline constexpr std::int64_t max_delta_max = 64;

/// Elementwise XOR. Throws std::invalid_argument on length mismatch.
Payload xor_payloads(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// In-place `acc ^= other`.
void xor_into(Payload& acc, std::span<const std::uint8_t> other);

/// Smallest sequence number still unexpired in interval `now`. Symbol i may
/// be carried or recovered in intervals i .. i+delta_max-1 and counts as
/// failed if undelivered when interval i+delta_max begins.
constexpr SymbolId oldest_unexpired(SymbolId now, const TimeConfig& cfg) noexcept
{
  const SymbolId first = now - cfg.delta_max + 1;
  return first > 0 ? first : 0;
}

constexpr bool is_expired(SymbolId id, SymbolId now, const TimeConfig& cfg) noexcept
{
  return id < oldest_unexpired(now, cfg);
}

/// Deterministic pseudo-random payloads: payload(i) depends only on the seed,
/// i and the symbol size, so sender and verifier regenerate identical bytes.
class SymbolSource
{
public:
  SymbolSource(std::uint64_t seed, std::int64_t symbol_bytes);

  Payload payload(SymbolId id) const;
  InfoSymbol symbol(SymbolId id) const { return {id, payload(id)}; }
  std::int64_t symbol_bytes() const noexcept { return bytes_; }

  /// Coded slot over `ids` (sorted and deduplicated here).
  Coded encode(std::vector<SymbolId> ids) const;
  Uncoded uncoded(SymbolId id) const { return {id, payload(id)}; }

private:
  std::uint64_t seed_;
  std::int64_t bytes_;
};

/// Checks the structural packet invariants: slot 0 uncoded with id == seq,
/// at most b slots, no duplicated uncoded id, no expired id, and every coded
/// payload equal to the XOR of its members. Returns false on violation.
bool packet_well_formed(const Packet& pkt, const TimeConfig& cfg, const SymbolSource& src);

} // namespace alc
