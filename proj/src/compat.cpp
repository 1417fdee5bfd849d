#include "objcheck/compat.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <map>

namespace objcheck {

namespace {

using Bits = std::vector<char>;

// Configurations from which some path reaches a seed, following edges
// backwards.
Bits backward_closure(const ReachGraph& g, const std::vector<std::vector<std::size_t>>& in,
                      Bits seeds) {
  std::deque<std::size_t> work;
  for (std::size_t c = 0; c < seeds.size(); ++c) {
    if (seeds[c]) work.push_back(c);
  }
  while (!work.empty()) {
    std::size_t c = work.front();
    work.pop_front();
    for (std::size_t e : in[c]) {
      std::size_t p = g.edges[e].from;
      if (!seeds[p]) {
        seeds[p] = 1;
        work.push_back(p);
      }
    }
  }
  return seeds;
}

// Per-member facts about the future of each configuration.
class Liveness {
 public:
  explicit Liveness(const Exploration& ex) : ex_(ex), g_(ex.graph) {
    const std::size_t n = ex.system->size();
    const std::size_t count = g_.configs.size();
    in_.resize(count);
    for (std::size_t e = 0; e < g_.edges.size(); ++e) in_[g_.edges[e].to].push_back(e);

    can_move_.resize(n);
    settles_.resize(n);
    for (std::size_t o = 0; o < n; ++o) {
      Bits moves(count, 0);
      for (const auto& e : g_.edges) {
        if (e.mover == o) moves[e.from] = 1;
      }
      can_move_[o] = backward_closure(g_, in_, std::move(moves));
      Bits settled(count, 0);
      for (std::size_t c = 0; c < count; ++c) settled[c] = stopped(o, c) || dead(o, c);
      settles_[o] = backward_closure(g_, in_, std::move(settled));
    }
  }

  const std::vector<std::vector<std::size_t>>& in() const { return in_; }

  bool stopped(std::size_t o, std::size_t c) const {
    return ex_.system->member(o).terminated(g_.configs[c].locals[o]);
  }
  /// Not stopped, and no continuation ever moves it again.
  bool dead(std::size_t o, std::size_t c) const { return !stopped(o, c) && !can_move_[o][c]; }
  /// Keeps moving along every continuation: never stops and never blocks.
  bool lives_forever(std::size_t o, std::size_t c) const { return !settles_[o][c]; }

 private:
  const Exploration& ex_;
  const ReachGraph& g_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<Bits> can_move_;
  std::vector<Bits> settles_;
};

struct Finding {
  std::size_t first = ReachGraph::npos;          // first configuration exhibiting it
  std::size_t first_primary = ReachGraph::npos;  // first where it is a root cause

  void see(std::size_t c, bool primary) {
    if (first == ReachGraph::npos) first = c;
    if (primary && first_primary == ReachGraph::npos) first_primary = c;
  }
  bool primary() const { return first_primary != ReachGraph::npos; }
  std::size_t witness() const { return primary() ? first_primary : first; }
};

std::string head_text(const std::vector<Message>& queue) {
  if (queue.empty()) return "nothing is ever sent";
  return fmt::format("the next queued message is `{}`", queue.front().label);
}

std::vector<Diagnostic> stuck_receives(const Exploration& ex, const Liveness& live) {
  const auto& g = ex.graph;
  const auto& sys = *ex.system;
  std::map<std::pair<std::size_t, std::uint32_t>, Finding> found;  // (member, point)

  for (std::size_t c = 0; c < g.configs.size(); ++c) {
    const auto& conf = g.configs[c];
    for (std::size_t o = 0; o < sys.size(); ++o) {
      if (!live.dead(o, c)) continue;
      const auto* recv = sys.member(o).point(conf.locals[o]).recv();
      if (!recv) continue;
      auto peer = sys.index_of(recv->peer);
      if (!peer) continue;
      // A non-matching head, a stopped sender, or a sender that never blocks
      // make this the root cause; a sender that is itself blocked does not.
      bool primary = !conf.queues[sys.channel(*peer, o)].empty() || live.stopped(*peer, c) ||
                     live.lives_forever(*peer, c);
      found[{o, conf.locals[o].point}].see(c, primary);
    }
  }

  std::vector<Diagnostic> out;
  for (const auto& [key, f] : found) {
    auto [o, point] = key;
    std::size_t c = f.witness();
    const auto& local = g.configs[c].locals[o];
    const auto* recv = sys.member(o).point(local).recv();
    std::size_t peer = *sys.index_of(recv->peer);
    const auto& queue = g.configs[c].queues[sys.channel(peer, o)];
    for (const auto& br : recv->branches) {
      auto d = make_diagnostic(
          DiagKind::StuckReceive, br.label_span,
          fmt::format("{} waits for `{}` from {}, which can never arrive ({})",
                      sys.member_names()[o], br.label, recv->peer, head_text(queue)));
      d.severity = f.primary() ? Severity::Error : Severity::Info;
      d.system = sys.name();
      d.witness = g.path_to(c);
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::vector<Diagnostic> undeliverable(const Exploration& ex, const Liveness& live) {
  const auto& g = ex.graph;
  const auto& sys = *ex.system;
  const std::size_t n = sys.size();
  const std::size_t channels = n * n;

  // Every queued message in every configuration is an instance, numbered
  // config by config, channel by channel, position by position.
  std::vector<std::size_t> base(g.configs.size() * channels + 1, 0);
  for (std::size_t c = 0; c < g.configs.size(); ++c) {
    for (std::size_t ch = 0; ch < channels; ++ch) {
      std::size_t k = c * channels + ch;
      base[k + 1] = base[k] + g.configs[c].queues[ch].size();
    }
  }
  const std::size_t total = base.back();
  auto id = [&](std::size_t c, std::size_t ch, std::size_t pos) {
    return base[c * channels + ch] + pos;
  };

  // Instance moves along an edge: a dequeue consumes position 0 and shifts
  // the rest; anything else leaves positions untouched.
  std::vector<std::vector<std::size_t>> preds(total);
  std::vector<char> consumed(total, 0);
  std::deque<std::size_t> work;
  for (const auto& e : g.edges) {
    for (std::size_t ch = 0; ch < channels; ++ch) {
      std::size_t len = g.configs[e.from].queues[ch].size();
      bool shifts = e.dequeued && *e.dequeued == ch;
      for (std::size_t pos = 0; pos < len; ++pos) {
        std::size_t from = id(e.from, ch, pos);
        if (shifts && pos == 0) {
          if (!consumed[from]) {
            consumed[from] = 1;
            work.push_back(from);
          }
          continue;
        }
        preds[id(e.to, ch, shifts ? pos - 1 : pos)].push_back(from);
      }
    }
  }
  while (!work.empty()) {
    std::size_t i = work.front();
    work.pop_front();
    for (std::size_t p : preds[i]) {
      if (!consumed[p]) {
        consumed[p] = 1;
        work.push_back(p);
      }
    }
  }

  // Among orphans, find those that can reach a state where the orphan itself
  // explains the failure: the receiver stopped, is blocked with this message
  // at the head of the very queue it reads, or never blocks at all.
  std::vector<char> primary(total, 0);
  for (std::size_t c = 0; c < g.configs.size(); ++c) {
    const auto& conf = g.configs[c];
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t r = 0; r < n; ++r) {
        std::size_t ch = sys.channel(s, r);
        for (std::size_t pos = 0; pos < conf.queues[ch].size(); ++pos) {
          std::size_t i = id(c, ch, pos);
          if (consumed[i]) continue;
          bool at_head = false;
          if (pos == 0 && live.dead(r, c)) {
            const auto* recv = sys.member(r).point(conf.locals[r]).recv();
            at_head = recv && recv->peer == sys.member_names()[s];
          }
          if (live.stopped(r, c) || at_head || live.lives_forever(r, c)) {
            primary[i] = 1;
            work.push_back(i);
          }
        }
      }
    }
  }
  while (!work.empty()) {
    std::size_t i = work.front();
    work.pop_front();
    for (std::size_t p : preds[i]) {
      if (!consumed[p] && !primary[p]) {
        primary[p] = 1;
        work.push_back(p);
      }
    }
  }

  std::map<SiteId, Finding> found;
  std::map<SiteId, const Message*> messages;
  for (std::size_t c = 0; c < g.configs.size(); ++c) {
    for (std::size_t ch = 0; ch < channels; ++ch) {
      const auto& queue = g.configs[c].queues[ch];
      for (std::size_t pos = 0; pos < queue.size(); ++pos) {
        std::size_t i = id(c, ch, pos);
        if (consumed[i]) continue;
        found[queue[pos].origin].see(c, primary[i]);
        messages.emplace(queue[pos].origin, &queue[pos]);
      }
    }
  }

  std::vector<Diagnostic> out;
  for (const auto& [site, f] : found) {
    const Message& m = *messages.at(site);
    const auto* send = sys.member(site.member).point(LocalState{site.point, {}}).send();
    auto d = make_diagnostic(DiagKind::UndeliverableSend, m.span,
                             fmt::format("message `{}` sent by {} to {} can never be delivered",
                                         m.label, sys.member_names()[site.member], send->peer));
    d.severity = f.primary() ? Severity::Error : Severity::Info;
    d.system = sys.name();
    d.witness = g.path_to(f.witness());
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

std::vector<Diagnostic> find_undeliverable(const Exploration& ex) {
  return undeliverable(ex, Liveness(ex));
}

std::vector<Diagnostic> find_stuck_receives(const Exploration& ex) {
  return stuck_receives(ex, Liveness(ex));
}

std::vector<Diagnostic> find_deadlocks(const Exploration& ex,
                                       const std::vector<Diagnostic>& stuck_receives) {
  const auto& g = ex.graph;
  const auto& sys = *ex.system;
  auto reported_stuck = [&](const RecvChoice& recv) {
    return std::any_of(stuck_receives.begin(), stuck_receives.end(), [&](const Diagnostic& d) {
      return d.severity == Severity::Error && d.span == recv.branches.front().label_span;
    });
  };

  std::map<std::pair<std::size_t, std::uint32_t>, std::size_t> found;  // blocked site -> config
  std::map<std::pair<std::size_t, std::uint32_t>, bool> subsumed;
  for (std::size_t c = 0; c < g.configs.size(); ++c) {
    if (!g.out[c].empty()) continue;
    const auto& conf = g.configs[c];
    std::optional<std::size_t> chosen;
    bool chosen_subsumed = false;
    for (std::size_t o = 0; o < sys.size(); ++o) {
      const auto* recv = sys.member(o).point(conf.locals[o]).recv();
      if (!recv) continue;
      if (!chosen) chosen = o;
      if (reported_stuck(*recv)) {
        chosen = o;
        chosen_subsumed = true;
        break;
      }
    }
    if (!chosen) continue;
    auto key = std::make_pair(*chosen, conf.locals[*chosen].point);
    if (found.emplace(key, c).second) subsumed[key] = chosen_subsumed;
  }

  std::vector<Diagnostic> out;
  for (const auto& [key, c] : found) {
    const auto& conf = g.configs[c];
    std::vector<std::string> blocked;
    for (std::size_t o = 0; o < sys.size(); ++o) {
      if (!sys.member(o).terminated(conf.locals[o])) blocked.push_back(sys.member_names()[o]);
    }
    const auto* recv = sys.member(key.first).point(conf.locals[key.first]).recv();
    auto d = make_diagnostic(
        DiagKind::Deadlock, recv->peer_span,
        fmt::format("deadlock: {} waits on {} and no step is possible (unfinished: {})",
                    sys.member_names()[key.first], recv->peer, fmt::join(blocked, ", ")));
    d.severity = subsumed[key] ? Severity::Info : Severity::Error;
    d.system = sys.name();
    d.witness = g.path_to(c);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Diagnostic> check_compatibility(const ResolvedSystem& system,
                                            const CheckOptions& options) {
  Exploration ex = explore(system, options);
  std::vector<Diagnostic> out = ex.diagnostics;
  if (ex.complete) {
    Liveness live(ex);
    auto orphans = undeliverable(ex, live);
    auto stuck = stuck_receives(ex, live);
    auto deadlocks = find_deadlocks(ex, stuck);
    for (auto* part : {&orphans, &stuck, &deadlocks}) {
      out.insert(out.end(), std::make_move_iterator(part->begin()),
                 std::make_move_iterator(part->end()));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.span != b.span) return span_less(a.span, b.span);
    return a.kind < b.kind;
  });
  return out;
}

}  // namespace objcheck
