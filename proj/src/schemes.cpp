#include "alc/schemes.hpp"

#include <algorithm>
#include <stdexcept>

namespace alc {

namespace {

class PacketBuilder
{
public:
  PacketBuilder(SymbolId now, const TimeConfig& cfg, const SymbolSource& src)
    : cfg_{cfg}
    , src_{src}
  {
    pkt_.seq = now;
    pkt_.slots.emplace_back(src.uncoded(now));
  }

  bool full() const noexcept { return static_cast<std::int64_t>(pkt_.slots.size()) >= cfg_.b; }
  std::int64_t free_slots() const noexcept { return cfg_.b - static_cast<std::int64_t>(pkt_.slots.size()); }

  void add(SymbolId id)
  {
    if (!full()) {
      pkt_.slots.emplace_back(src_.uncoded(id));
    }
  }

  void add_coded(std::vector<SymbolId> ids)
  {
    if (!full() && !ids.empty()) {
      pkt_.slots.emplace_back(src_.encode(std::move(ids)));
    }
  }

  Packet take() { return std::move(pkt_); }

private:
  const TimeConfig& cfg_;
  const SymbolSource& src_;
  Packet pkt_;
};

std::vector<SymbolId> id_range(SymbolId first, SymbolId last_inclusive)
{
  std::vector<SymbolId> ids;
  for (SymbolId id = first; id <= last_inclusive; ++id) {
    ids.push_back(id);
  }
  return ids;
}

// Selective/repetition anchor: the sender's own list names the candidates,
// so an expired u is replaced by the oldest remaining unacknowledged id.
FeedbackAnchor list_anchor(const Feedback& fb, SymbolId now, const SelectiveState& state, const TimeConfig& cfg)
{
  FeedbackAnchor a{fb.u, fb.beta};
  if (a.beta <= 0 || a.u >= now) {
    return {now, 0};
  }
  if (is_expired(a.u, now, cfg)) {
    a.beta -= 1;
    a.u = state.unacked.empty() ? now : *state.unacked.begin();
  }
  if (a.beta > 0 && !state.unacked.contains(a.u)) {
    if (state.unacked.empty()) {
      return {now, 0};
    }
    a.u = *state.unacked.begin();
  }
  if (a.beta <= 0) {
    return {now, 0};
  }
  return a;
}

void record_sent(SelectiveState& state, const Packet& pkt)
{
  state.unacked.insert(pkt.seq);
  state.sent_contents[pkt.seq] = pkt.uncoded_ids();
}

} // namespace

std::string_view to_string(SchemeKind kind) noexcept
{
  switch (kind) {
    case SchemeKind::windowed: return "windowed";
    case SchemeKind::selective: return "selective";
    case SchemeKind::repetition: return "repetition";
    case SchemeKind::blind: return "blind";
  }
  return "unknown";
}

SchemeKind parse_scheme(std::string_view name)
{
  for (auto k : {SchemeKind::windowed, SchemeKind::selective, SchemeKind::repetition, SchemeKind::blind}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw std::invalid_argument("unknown scheme '" + std::string{name} + "'");
}

std::vector<SymbolId> draw_subset(std::span<const SymbolId> pool, std::int64_t d, Rng& rng)
{
  std::vector<SymbolId> work(pool.begin(), pool.end());
  const auto take = static_cast<std::size_t>(std::clamp<std::int64_t>(d, 0, static_cast<std::int64_t>(work.size())));
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick{i, work.size() - 1};
    std::swap(work[i], work[pick(rng)]);
  }
  work.resize(take);
  std::sort(work.begin(), work.end());
  return work;
}

FeedbackAnchor window_anchor(const Feedback& fb, SymbolId now, const TimeConfig& cfg)
{
  FeedbackAnchor a{fb.u, fb.beta};
  if (a.beta <= 0 || a.u >= now) {
    return {now, 0};
  }
  const SymbolId u_max = oldest_unexpired(now, cfg);
  if (a.u < u_max) {
    // s_u was undelivered and has just expired; the next candidate is u_max.
    a.beta -= 1;
    a.u = u_max;
  }
  if (a.beta <= 0 || a.u >= now) {
    return {now, 0};
  }
  a.beta = std::min(a.beta, now - a.u);
  return a;
}

void WindowedState::observe_feedback(SymbolId /*now*/, const std::optional<Feedback>& fb)
{
  fb_fresh = fb.has_value();
  if (fb) {
    last_fb = fb;
    u_l = std::max(u_l, fb->u);
  }
}

Packet windowed_build(const WindowedState& state, SymbolId now, const TimeConfig& cfg,
                      const DegreeTable& table, const SymbolSource& src, Rng& rng)
{
  PacketBuilder pb{now, cfg, src};

  if (state.fb_fresh && state.last_fb) {
    const auto [u, beta] = window_anchor(*state.last_fb, now, cfg);
    if (u >= now) {
      return pb.take();
    }
    const std::int64_t span = now - u;  // entries in w = {s_u .. s_{now-1}}
    pb.add(u);
    if (span <= cfg.b - 1) {
      for (SymbolId id = u + 1; id < now; ++id) {
        pb.add(id);
      }
    } else if (beta > 1) {
      if (beta >= span) {
        // nothing in w delivered: first b-1 entries of w uncoded
        for (SymbolId id = u + 1; id < now && !pb.full(); ++id) {
          pb.add(id);
        }
      } else {
        const auto pool = id_range(u + 1, now - 1);
        const std::int64_t d = table.lookup(span - 1, beta - 1);
        while (!pb.full()) {
          pb.add_coded(draw_subset(pool, d, rng));
        }
      }
    }
    return pb.take();
  }

  const SymbolId u_max = oldest_unexpired(now, cfg);
  const std::int64_t z = std::max<std::int64_t>(0, now - std::max(state.u_l, u_max));
  if (z == 0) {
    return pb.take();
  }
  if (z <= cfg.b - 1) {
    for (SymbolId id = now - 1; id >= now - z; --id) {
      pb.add(id);
    }
  } else {
    const auto pool = id_range(now - z, now - 1);
    while (!pb.full()) {
      pb.add_coded(draw_subset(pool, uniform_degree(z, rng), rng));
    }
  }
  return pb.take();
}

void selective_observe_feedback(SelectiveState& state, SymbolId now, const std::optional<Feedback>& fb,
                                const TimeConfig& cfg)
{
  state.fb_fresh = fb.has_value();
  if (fb) {
    state.unacked.erase(state.unacked.begin(), state.unacked.lower_bound(fb->u));
    if (fb->ack) {
      if (auto it = state.sent_contents.find(now - 1); it != state.sent_contents.end()) {
        for (SymbolId id : it->second) {
          state.unacked.erase(id);
        }
      }
    }
    state.u_l = std::max(state.u_l, fb->u);
    state.last_fb = fb;
  }
  const SymbolId u_max = oldest_unexpired(now, cfg);
  state.unacked.erase(state.unacked.begin(), state.unacked.lower_bound(u_max));
  state.sent_contents.erase(state.sent_contents.begin(), state.sent_contents.lower_bound(std::min(u_max, now - 1)));
}

Packet selective_build(SelectiveState& state, SymbolId now, const TimeConfig& cfg,
                       const DegreeTable& table, const SymbolSource& src, Rng& rng)
{
  PacketBuilder pb{now, cfg, src};
  const auto n = static_cast<std::int64_t>(state.unacked.size());

  if (state.fb_fresh && state.last_fb) {
    const auto [u, beta] = list_anchor(*state.last_fb, now, state, cfg);
    if (beta >= 1) {
      pb.add(u);
    }
    if (beta > 1) {
      std::vector<SymbolId> rest;
      for (SymbolId id : state.unacked) {
        if (id != u) {
          rest.push_back(id);
        }
      }
      if (n <= beta) {
        // the sender knows exactly which symbols are missing
        for (std::size_t k = 0; k < rest.size() && k + 2 < static_cast<std::size_t>(cfg.b); ++k) {
          pb.add(rest[k]);
        }
      } else if (n <= cfg.b - 1) {
        for (SymbolId id : rest) {
          pb.add(id);
        }
      } else {
        const std::int64_t d = table.lookup(n - 1, beta - 1);
        while (!pb.full()) {
          pb.add_coded(draw_subset(rest, d, rng));
        }
      }
    }
  } else if (n > 0) {
    if (n <= cfg.b - 1) {
      for (SymbolId id : state.unacked) {
        pb.add(id);
      }
    } else {
      const std::vector<SymbolId> pool(state.unacked.begin(), state.unacked.end());
      while (!pb.full()) {
        pb.add_coded(draw_subset(pool, uniform_degree(n, rng), rng));
      }
    }
  }

  Packet pkt = pb.take();
  record_sent(state, pkt);
  return pkt;
}

Packet repetition_build(SelectiveState& state, SymbolId now, const TimeConfig& cfg, const SymbolSource& src)
{
  PacketBuilder pb{now, cfg, src};
  SymbolId u = now;
  if (state.fb_fresh && state.last_fb) {
    u = list_anchor(*state.last_fb, now, state, cfg).u;
    if (u != now) {
      pb.add(u);
    }
  }
  for (auto it = state.unacked.rbegin(); it != state.unacked.rend() && !pb.full(); ++it) {
    if (*it != u && *it != now) {
      pb.add(*it);
    }
  }
  Packet pkt = pb.take();
  record_sent(state, pkt);
  return pkt;
}

Packet blind_build(SymbolId now, const TimeConfig& cfg, const BlindConfig& blind, const SymbolSource& src,
                   Rng& rng)
{
  PacketBuilder pb{now, cfg, src};
  const SymbolId first = oldest_unexpired(now, cfg);
  if (first >= now) {
    return pb.take();
  }
  const auto pool = id_range(first, now - 1);
  const std::int64_t degree = blind.resolved(cfg);
  while (!pb.full()) {
    pb.add_coded(draw_subset(pool, degree, rng));
  }
  return pb.take();
}

namespace {

class WindowedSender final : public Sender
{
public:
  WindowedSender(const TimeConfig& cfg, const DegreeTable& table, const SymbolSource& src, Rng& rng)
    : cfg_{cfg}, table_{table}, src_{src}, rng_{rng}
  {}

  void observe_feedback(SymbolId now, const std::optional<Feedback>& fb) override { state_.observe_feedback(now, fb); }
  Packet build_packet(SymbolId now) override { return windowed_build(state_, now, cfg_, table_, src_, rng_); }

private:
  TimeConfig cfg_;
  const DegreeTable& table_;
  const SymbolSource& src_;
  Rng& rng_;
  WindowedState state_;
};

class SelectiveSender final : public Sender
{
public:
  SelectiveSender(const TimeConfig& cfg, const DegreeTable& table, const SymbolSource& src, Rng& rng)
    : cfg_{cfg}, table_{table}, src_{src}, rng_{rng}
  {}

  void observe_feedback(SymbolId now, const std::optional<Feedback>& fb) override
  {
    selective_observe_feedback(state_, now, fb, cfg_);
  }
  Packet build_packet(SymbolId now) override { return selective_build(state_, now, cfg_, table_, src_, rng_); }

private:
  TimeConfig cfg_;
  const DegreeTable& table_;
  const SymbolSource& src_;
  Rng& rng_;
  SelectiveState state_;
};

class RepetitionSender final : public Sender
{
public:
  RepetitionSender(const TimeConfig& cfg, const SymbolSource& src)
    : cfg_{cfg}, src_{src}
  {}

  void observe_feedback(SymbolId now, const std::optional<Feedback>& fb) override
  {
    selective_observe_feedback(state_, now, fb, cfg_);
  }
  Packet build_packet(SymbolId now) override { return repetition_build(state_, now, cfg_, src_); }

private:
  TimeConfig cfg_;
  const SymbolSource& src_;
  SelectiveState state_;
};

class BlindSender final : public Sender
{
public:
  BlindSender(const TimeConfig& cfg, const SymbolSource& src, Rng& rng, BlindConfig blind)
    : cfg_{cfg}, src_{src}, rng_{rng}, blind_{blind}
  {}

  void observe_feedback(SymbolId, const std::optional<Feedback>&) override {}
  Packet build_packet(SymbolId now) override { return blind_build(now, cfg_, blind_, src_, rng_); }

private:
  TimeConfig cfg_;
  const SymbolSource& src_;
  Rng& rng_;
  BlindConfig blind_;
};

} // namespace

std::unique_ptr<Sender> make_sender(SchemeKind kind, const TimeConfig& cfg, const DegreeTable& table,
                                    const SymbolSource& src, Rng& rng, BlindConfig blind)
{
  switch (kind) {
    case SchemeKind::windowed: return std::make_unique<WindowedSender>(cfg, table, src, rng);
    case SchemeKind::selective: return std::make_unique<SelectiveSender>(cfg, table, src, rng);
    case SchemeKind::repetition: return std::make_unique<RepetitionSender>(cfg, src);
    case SchemeKind::blind: return std::make_unique<BlindSender>(cfg, src, rng, blind);
  }
  throw std::invalid_argument("unknown scheme");
}

} // namespace alc
