#include "alc/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace alc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

std::vector<SymbolId> Packet::uncoded_ids() const
{
  std::vector<SymbolId> ids;
  for (const auto& slot : slots) {
    if (const auto* u = std::get_if<Uncoded>(&slot)) {
      ids.push_back(u->id);
    }
  }
  return ids;
}

std::size_t Packet::coded_count() const noexcept
{
  return static_cast<std::size_t>(std::count_if(slots.begin(), slots.end(), [](const PayloadSlot& s) {
    return std::holds_alternative<Coded>(s);
  }));
}

void TimeConfig::validate() const
{
  if (delta_max < 1 || delta_max > max_delta_max) {
    throw std::invalid_argument("delta_max must be in [1, 64]");
  }
  if (b < 1) {
    throw std::invalid_argument("b must be at least 1");
  }
  if (l < 1) {
    throw std::invalid_argument("l must be at least 1");
  }
}

Payload xor_payloads(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b)
{
  if (a.size() != b.size()) {
    throw std::invalid_argument("xor_payloads: length mismatch");
  }
  Payload out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] ^= b[i];
  }
  return out;
}

void xor_into(Payload& acc, std::span<const std::uint8_t> other)
{
  if (acc.size() != other.size()) {
    throw std::invalid_argument("xor_into: length mismatch");
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    acc[i] ^= other[i];
  }
}

SymbolSource::SymbolSource(std::uint64_t seed, std::int64_t symbol_bytes)
  : seed_{seed}
  , bytes_{symbol_bytes}
{
  if (symbol_bytes < 1) {
    throw std::invalid_argument("symbol size must be at least one byte");
  }
}

Payload SymbolSource::payload(SymbolId id) const
{
  std::uint64_t state = seed_ ^ (static_cast<std::uint64_t>(id) * 0xd1b54a32d192ed03ULL);
  Payload out(static_cast<std::size_t>(bytes_));
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i % 8 == 0) {
      word = splitmix64(state);
    }
    out[i] = static_cast<std::uint8_t>(word >> (8 * (i % 8)));
  }
  return out;
}

Coded SymbolSource::encode(std::vector<SymbolId> ids) const
{
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.empty()) {
    throw std::invalid_argument("coded symbol needs at least one member");
  }
  Payload acc(static_cast<std::size_t>(bytes_), 0);
  for (SymbolId id : ids) {
    xor_into(acc, payload(id));
  }
  return {std::move(ids), std::move(acc)};
}

bool packet_well_formed(const Packet& pkt, const TimeConfig& cfg, const SymbolSource& src)
{
  if (pkt.slots.empty() || static_cast<std::int64_t>(pkt.slots.size()) > cfg.b) {
    return false;
  }
  const auto* first = std::get_if<Uncoded>(&pkt.slots.front());
  if (first == nullptr || first->id != pkt.seq) {
    return false;
  }
  std::unordered_set<SymbolId> seen;
  for (const auto& slot : pkt.slots) {
    if (const auto* u = std::get_if<Uncoded>(&slot)) {
      if (!seen.insert(u->id).second || u->id > pkt.seq || is_expired(u->id, pkt.seq, cfg)) {
        return false;
      }
      if (u->payload != src.payload(u->id)) {
        return false;
      }
    } else {
      const auto& c = std::get<Coded>(slot);
      if (c.ids.empty()) {
        return false;
      }
      for (SymbolId id : c.ids) {
        if (id > pkt.seq || is_expired(id, pkt.seq, cfg)) {
          return false;
        }
      }
      if (c.payload != src.encode(c.ids).payload) {
        return false;
      }
    }
  }
  return true;
}

} // namespace alc
