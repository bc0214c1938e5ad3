#pragma once

#include "alc/core.hpp"

#include <map>
#include <vector>

namespace alc {

/// Receiver-side delivery tracking with an iterative peeling decoder.
///
/// Coded slots are reduced by every delivered member; a slot reduced to one
/// unknown delivers it, and unresolved slots are buffered and re-peeled
/// whenever something new is delivered. Slots that still name an expired
/// undelivered symbol are dropped at expiry.
class Receiver
{
public:
  /// With `verify` set, every delivered payload is compared against the
  /// source and a mismatch throws std::logic_error.
  explicit Receiver(TimeConfig cfg, const SymbolSource* verify = nullptr);

  /// Returns the ids newly delivered by this packet, in delivery order.
  std::vector<SymbolId> process_packet(const Packet& pkt, SymbolId now);

  /// Adjudicates every symbol whose deadline has been reached by interval
  /// `now`; returns the number of new failures.
  std::int64_t expire_and_count(SymbolId now);

  /// Cumulative feedback after packet `last_pkt_seq`.
  Feedback make_feedback(bool just_received, SymbolId last_pkt_seq, SymbolId now) const;

  bool is_delivered(SymbolId id) const { return delivered_.contains(id); }
  /// nullptr unless `id` is delivered and still inside the unexpired window.
  const Payload* delivered_payload(SymbolId id) const;

  std::int64_t failure_count() const noexcept { return failures_; }
  std::int64_t delivered_count() const noexcept { return delivered_total_; }
  std::size_t pending_size() const noexcept { return pending_.size(); }

private:
  struct Equation
  {
    std::vector<SymbolId> ids;
    Payload payload;
  };

  void deliver(SymbolId id, Payload payload, std::vector<SymbolId>& out);
  /// XORs out delivered members; returns false if the equation became empty.
  bool reduce(Equation& eq) const;
  void peel(std::vector<SymbolId>& out);

  TimeConfig cfg_;
  const SymbolSource* verify_;
  std::map<SymbolId, Payload> delivered_;  // unexpired window only
  std::vector<Equation> pending_;
  SymbolId next_deadline_ = 0;  // smallest id not yet adjudicated
  std::int64_t failures_ = 0;
  std::int64_t delivered_total_ = 0;
};

} // namespace alc
