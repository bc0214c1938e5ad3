#include "alc/receiver.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace alc {

Receiver::Receiver(TimeConfig cfg, const SymbolSource* verify)
  : cfg_{cfg}
  , verify_{verify}
{
  cfg_.validate();
}

const Payload* Receiver::delivered_payload(SymbolId id) const
{
  auto it = delivered_.find(id);
  return it == delivered_.end() ? nullptr : &it->second;
}

void Receiver::deliver(SymbolId id, Payload payload, std::vector<SymbolId>& out)
{
  if (verify_ != nullptr && payload != verify_->payload(id)) {
    throw std::logic_error("decoder produced a wrong payload for symbol " + std::to_string(id));
  }
  if (delivered_.emplace(id, std::move(payload)).second) {
    ++delivered_total_;
    out.push_back(id);
  }
}

bool Receiver::reduce(Equation& eq) const
{
  auto keep = eq.ids.begin();
  for (SymbolId id : eq.ids) {
    if (const Payload* p = delivered_payload(id)) {
      xor_into(eq.payload, *p);
    } else {
      *keep++ = id;
    }
  }
  eq.ids.erase(keep, eq.ids.end());
  return !eq.ids.empty();
}

void Receiver::peel(std::vector<SymbolId>& out)
{
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<Equation> still_pending;
    still_pending.reserve(pending_.size());
    for (auto& eq : pending_) {
      if (!reduce(eq)) {
        continue;
      }
      if (eq.ids.size() == 1) {
        if (!is_delivered(eq.ids.front())) {
          deliver(eq.ids.front(), std::move(eq.payload), out);
          progress = true;
        }
        continue;
      }
      still_pending.push_back(std::move(eq));
    }
    pending_ = std::move(still_pending);
  }
}

std::vector<SymbolId> Receiver::process_packet(const Packet& pkt, SymbolId now)
{
  std::vector<SymbolId> out;
  for (const auto& slot : pkt.slots) {
    if (const auto* u = std::get_if<Uncoded>(&slot)) {
      if (!is_expired(u->id, now, cfg_) && !is_delivered(u->id)) {
        deliver(u->id, u->payload, out);
      }
    }
  }
  for (const auto& slot : pkt.slots) {
    if (const auto* c = std::get_if<Coded>(&slot)) {
      const bool stale = std::any_of(c->ids.begin(), c->ids.end(), [&](SymbolId id) {
        return is_expired(id, now, cfg_);
      });
      if (!stale) {
        pending_.push_back({c->ids, c->payload});
      }
    }
  }
  peel(out);
  return out;
}

std::int64_t Receiver::expire_and_count(SymbolId now)
{
  const SymbolId first_live = oldest_unexpired(now, cfg_);
  std::int64_t fresh = 0;
  for (; next_deadline_ < first_live; ++next_deadline_) {
    if (!is_delivered(next_deadline_)) {
      ++fresh;
    }
  }
  failures_ += fresh;
  delivered_.erase(delivered_.begin(), delivered_.lower_bound(first_live));
  std::erase_if(pending_, [&](const Equation& eq) { return eq.ids.front() < first_live; });
  return fresh;
}

Feedback Receiver::make_feedback(bool just_received, SymbolId last_pkt_seq, SymbolId now) const
{
  Feedback fb{just_received, last_pkt_seq + 1, 0};
  for (SymbolId id = oldest_unexpired(now, cfg_); id <= last_pkt_seq; ++id) {
    if (!is_delivered(id)) {
      if (fb.beta == 0) {
        fb.u = id;
      }
      ++fb.beta;
    }
  }
  return fb;
}

} // namespace alc
