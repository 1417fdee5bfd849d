#include "objcheck/explore.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

namespace objcheck {

std::size_t hash_value(const Configuration& c) {
  std::size_t h = 0x9e3779b9u;
  for (const auto& l : c.locals) h = h * 31 + hash_value(l);
  for (const auto& q : c.queues) {
    h = h * 17 + q.size();
    for (const auto& m : q) {
      h = h * 31 + std::hash<std::string>{}(m.label);
      h = h * 31 + (m.origin.member * 131u + m.origin.point * 7u + m.origin.branch);
      for (const auto& v : m.payload) h = h * 31 + v.hash();
    }
  }
  return h;
}

AsyncSystem::AsyncSystem(const ResolvedSystem& system, const CheckOptions& options)
    : name_(system.name), options_(options) {
  for (const auto& [name, decl] : system.objects) {
    names_.push_back(name);
    automata_.push_back(std::make_shared<const ObjectAutomaton>(
        decl, AutomatonOptions{options.invoke_depth}));
  }
}

std::optional<std::size_t> AsyncSystem::index_of(std::string_view participant) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), participant);
  if (it == names_.end() || *it != participant) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

Configuration AsyncSystem::initial() const {
  Configuration c;
  for (const auto& a : automata_) c.locals.push_back(a->initial());
  c.queues.resize(automata_.size() * automata_.size());
  return c;
}

std::vector<AsyncSystem::Successor> AsyncSystem::successors(const Configuration& c,
                                                            std::vector<Blocked>* blocked) const {
  std::vector<Successor> out;
  for (std::size_t i = 0; i < automata_.size(); ++i) {
    const ObjectAutomaton& a = *automata_[i];
    const LocalState& local = c.locals[i];
    const Proc& point = a.point(local);
    if (point.is_stop()) continue;

    if (const auto* send = point.send()) {
      auto peer = index_of(send->peer);
      for (auto& ls : a.successors(local)) {
        Step step{names_[i], ls.branch,
                  peer ? Step::Kind::InternalSend : Step::Kind::ExternalSend,
                  send->peer, ls.action.label, ls.action.payload, ls.action.span};
        Configuration next = c;
        next.locals[i] = std::move(ls.next);
        if (peer) {
          SiteId site{static_cast<std::uint32_t>(i), local.point,
                      static_cast<std::uint32_t>(ls.branch)};
          auto& queue = next.queues[channel(i, *peer)];
          if (queue.size() >= options_.queue_bound) {
            if (blocked) {
              blocked->push_back(Blocked{Blocked::Why::QueueFull, i, site, ls.action.span, {},
                                         ls.action.label});
            }
            continue;
          }
          queue.push_back(Message{ls.action.label, ls.action.payload, site, ls.action.span});
        }
        out.push_back(Successor{std::move(step), std::move(next), i, std::nullopt});
      }
      continue;
    }

    const auto* recv = point.recv();
    auto peer = index_of(recv->peer);
    if (!peer) {
      for (auto& ls : a.successors(local)) {
        Step step{names_[i], ls.branch, Step::Kind::ExternalReceive, recv->peer,
                  ls.action.label, ls.action.payload, ls.action.span};
        Configuration next = c;
        next.locals[i] = std::move(ls.next);
        out.push_back(Successor{std::move(step), std::move(next), i, std::nullopt});
      }
      continue;
    }
    std::size_t ch = channel(*peer, i);
    const auto& queue = c.queues[ch];
    if (queue.empty()) continue;
    const Message& head = queue.front();
    for (std::size_t b = 0; b < recv->branches.size(); ++b) {
      const auto& br = recv->branches[b];
      if (br.label != head.label) continue;
      if (br.binders.size() != head.payload.size()) {
        if (blocked) {
          blocked->push_back(Blocked{Blocked::Why::ArityMismatch, i, head.origin, head.span,
                                     br.label_span, head.label});
        }
        continue;
      }
      Step step{names_[i], b, Step::Kind::InternalReceive, recv->peer, head.label, head.payload,
                br.label_span};
      Configuration next = c;
      next.locals[i] = a.receive(local, b, head.payload);
      next.queues[ch].erase(next.queues[ch].begin());
      out.push_back(Successor{std::move(step), std::move(next), i, ch});
    }
  }
  return out;
}

std::optional<Configuration> AsyncSystem::replay(std::span<const Step> steps) const {
  Configuration c = initial();
  for (const auto& step : steps) {
    bool found = false;
    for (auto& s : successors(c)) {
      if (s.step.actor == step.actor && s.step.branch == step.branch &&
          s.step.kind == step.kind) {
        c = std::move(s.next);
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return c;
}

std::vector<std::size_t> ReachGraph::edge_path_to(std::size_t config) const {
  std::vector<std::size_t> path;
  for (std::size_t c = config; parent[c] != npos; c = edges[parent[c]].from) {
    path.push_back(parent[c]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<Step> ReachGraph::path_to(std::size_t config) const {
  std::vector<Step> out;
  for (std::size_t e : edge_path_to(config)) out.push_back(edges[e].step);
  return out;
}

std::optional<std::size_t> ReachGraph::find(const Configuration& c) const {
  auto it = std::find(configs.begin(), configs.end(), c);
  if (it == configs.end()) return std::nullopt;
  return static_cast<std::size_t>(it - configs.begin());
}

namespace {

struct ConfigHash {
  std::size_t operator()(const Configuration& c) const { return hash_value(c); }
};

}  // namespace

Exploration explore(const ResolvedSystem& system, const CheckOptions& options) {
  Exploration ex;
  auto async = std::make_shared<const AsyncSystem>(system, options);
  ex.system = async;
  ReachGraph& g = ex.graph;

  auto limit = [&](DiagKind kind, Span span, std::string message, std::size_t at) {
    auto d = make_diagnostic(kind, span, std::move(message));
    d.system = system.name;
    if (at != ReachGraph::npos) d.witness = g.path_to(at);
    ex.diagnostics.push_back(std::move(d));
    ex.complete = false;
  };

  std::unordered_map<Configuration, std::size_t, ConfigHash> index;
  try {
    g.configs.push_back(async->initial());
  } catch (const InvokeDepthError& e) {
    limit(DiagKind::InvokeDepth, e.span, e.what(), ReachGraph::npos);
    return ex;
  }
  g.parent.push_back(ReachGraph::npos);
  g.out.emplace_back();
  index.emplace(g.configs.front(), 0);

  std::map<std::pair<int, SiteId>, bool> reported;
  bool truncated = false;
  for (std::size_t cur = 0; cur < g.configs.size(); ++cur) {
    std::vector<AsyncSystem::Blocked> blocked;
    std::vector<AsyncSystem::Successor> succ;
    try {
      succ = async->successors(g.configs[cur], &blocked);
    } catch (const InvokeDepthError& e) {
      limit(DiagKind::InvokeDepth, e.span, e.what(), cur);
      return ex;
    }
    for (const auto& b : blocked) {
      int why = static_cast<int>(b.why);
      if (!reported.emplace(std::make_pair(why, b.site), true).second) continue;
      const std::string& sender = async->member_names()[b.site.member];
      if (b.why == AsyncSystem::Blocked::Why::QueueFull) {
        limit(DiagKind::QueueOverflow, b.span,
              fmt::format("sending `{}` from {} would exceed the queue bound of {}", b.label,
                          sender, options.queue_bound),
              cur);
      } else {
        auto d = make_diagnostic(
            DiagKind::ArityMismatch, b.span,
            fmt::format("`{}` sent by {} does not match the number of values {} expects", b.label,
                        sender, async->member_names()[b.member]));
        d.system = system.name;
        d.witness = g.path_to(cur);
        d.notes.push_back(Note{b.receive_span, "receiving branch"});
        ex.diagnostics.push_back(std::move(d));
      }
    }
    for (auto& s : succ) {
      auto it = index.find(s.next);
      if (it == index.end()) {
        if (g.configs.size() >= options.max_configs) {
          truncated = true;
          continue;
        }
        it = index.emplace(s.next, g.configs.size()).first;
        g.configs.push_back(std::move(s.next));
        g.parent.push_back(g.edges.size());
        g.out.emplace_back();
      }
      g.out[cur].push_back(g.edges.size());
      g.edges.push_back(ReachGraph::Edge{cur, it->second, std::move(s.step), s.mover, s.dequeued});
    }
  }
  if (truncated) {
    limit(DiagKind::StateLimit, system.decl->name_span,
          fmt::format("exploration of `{}` stopped after {} configurations", system.name,
                      options.max_configs),
          ReachGraph::npos);
  }
  return ex;
}

Trace simulate(const ResolvedSystem& system, std::uint64_t seed, std::size_t max_steps,
               const CheckOptions& options) {
  AsyncSystem async(system, options);
  std::mt19937_64 rng(seed);
  Trace t;
  t.final = async.initial();
  for (std::size_t i = 0; i < max_steps; ++i) {
    auto succ = async.successors(t.final);
    if (succ.empty()) break;
    // modulo rather than a distribution: mt19937_64 output is portable,
    // distributions are not
    auto& pick = succ[rng() % succ.size()];
    t.steps.push_back(std::move(pick.step));
    t.final = std::move(pick.next);
  }
  return t;
}

}  // namespace objcheck
