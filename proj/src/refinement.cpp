#include "objcheck/refinement.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace objcheck {

std::optional<std::size_t> ObservableLTS::follow(std::span<const Step> steps) const {
  if (states == 0) return std::nullopt;
  std::size_t s = initial;
  for (const Step& step : steps) {
    auto it = std::find_if(out[s].begin(), out[s].end(),
                           [&](std::size_t e) { return edges[e].step == step; });
    if (it == out[s].end()) return std::nullopt;
    s = edges[*it].to;
  }
  return s;
}

std::vector<std::string> ObservableLTS::alphabet() const {
  std::set<std::string> names;
  for (const auto& e : edges) {
    if (e.silent()) continue;
    names.insert(fmt::format("{}{}{}{}/{}", e.step.actor, e.step.is_send() ? "!" : "?",
                             e.step.peer, ":" + e.step.label, e.step.payload.size()));
  }
  return {names.begin(), names.end()};
}

std::vector<std::size_t> ObservableLTS::silent_closure(std::size_t s) const {
  std::vector<std::size_t> order{s};
  std::vector<char> seen(states, 0);
  seen[s] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t e : out[order[i]]) {
      if (edges[e].silent() && !seen[edges[e].to]) {
        seen[edges[e].to] = 1;
        order.push_back(edges[e].to);
      }
    }
  }
  return order;
}

ObservableLTS observable_lts(const Exploration& ex) {
  ObservableLTS lts;
  lts.system = ex.system ? ex.system->name() : std::string();
  lts.states = ex.graph.configs.size();
  lts.out = ex.graph.out;
  lts.edges.reserve(ex.graph.edges.size());
  for (const auto& e : ex.graph.edges) lts.edges.push_back({e.from, e.to, e.step});
  lts.diagnostics = ex.diagnostics;
  lts.complete = ex.complete;
  return lts;
}

ObservableLTS observable_lts(const ResolvedSystem& system, const CheckOptions& options) {
  return observable_lts(explore(system, options));
}

bool observably_matches(const Step& a, const Step& b) {
  if (a.actor != b.actor || a.peer != b.peer || a.kind != b.kind || a.label != b.label ||
      a.payload.size() != b.payload.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.payload.size(); ++i) {
    if (!compatible(a.payload[i], b.payload[i])) return false;
  }
  return true;
}

namespace {

// Weak moves of one LTS: for every state, the observable edges leaving its
// silent closure.
struct WeakMoves {
  std::vector<std::vector<std::size_t>> closure;
  std::vector<std::vector<std::size_t>> receives;  // edge ids
  std::vector<std::vector<std::size_t>> sends;

  explicit WeakMoves(const ObservableLTS& lts) {
    closure.resize(lts.states);
    receives.resize(lts.states);
    sends.resize(lts.states);
    for (std::size_t s = 0; s < lts.states; ++s) {
      closure[s] = lts.silent_closure(s);
      for (std::size_t c : closure[s]) {
        for (std::size_t e : lts.out[c]) {
          const Step& step = lts.edges[e].step;
          if (step.is_internal()) continue;
          (step.is_send() ? sends[s] : receives[s]).push_back(e);
        }
      }
    }
  }
};

// Silent steps from `from` to `to`; `to` must be in the closure of `from`.
std::vector<Step> silent_path(const ObservableLTS& lts, std::size_t from, std::size_t to) {
  std::map<std::size_t, std::size_t> via;  // state -> edge that reached it
  std::deque<std::size_t> work{from};
  via[from] = static_cast<std::size_t>(-1);
  while (!work.empty() && !via.count(to)) {
    std::size_t s = work.front();
    work.pop_front();
    for (std::size_t e : lts.out[s]) {
      const auto& edge = lts.edges[e];
      if (edge.silent() && via.emplace(edge.to, e).second) work.push_back(edge.to);
    }
  }
  std::vector<Step> path;
  for (std::size_t s = to; s != from;) {
    const auto& edge = lts.edges[via.at(s)];
    path.push_back(edge.step);
    s = edge.from;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

class Simulation {
 public:
  Simulation(const ObservableLTS& refined, const ObservableLTS& abstract)
      : r_(refined), a_(abstract), rw_(refined), aw_(abstract),
        rel_(refined.states * abstract.states, 1) {}

  bool related(std::size_t r, std::size_t a) const { return rel_[r * a_.states + a]; }

  void solve() {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t r = 0; r < r_.states; ++r) {
        for (std::size_t a = 0; a < a_.states; ++a) {
          if (related(r, a) && !transfers(r, a)) {
            rel_[r * a_.states + a] = 0;
            changed = true;
          }
        }
      }
    }
  }

  SimulationResult result() const {
    SimulationResult res;
    res.holds = r_.states > 0 && a_.states > 0 && related(r_.initial, a_.initial);
    for (std::size_t r = 0; r < r_.states; ++r) {
      for (std::size_t a = 0; a < a_.states; ++a) {
        if (related(r, a)) res.relation.emplace_back(r, a);
      }
    }
    if (!res.holds && r_.states > 0 && a_.states > 0) res.counterexamples = counterexamples();
    return res;
  }

 private:
  // Receives the abstract side offers, with the refined edges able to match
  // each one (ignoring the relation).
  std::vector<std::size_t> recv_candidates(std::size_t r, std::size_t ae) const {
    std::vector<std::size_t> out;
    for (std::size_t re : rw_.receives[r]) {
      if (observably_matches(r_.edges[re].step, a_.edges[ae].step)) out.push_back(re);
    }
    return out;
  }

  std::vector<std::size_t> send_candidates(std::size_t a, std::size_t re) const {
    std::vector<std::size_t> out;
    for (std::size_t ae : aw_.sends[a]) {
      if (observably_matches(r_.edges[re].step, a_.edges[ae].step)) out.push_back(ae);
    }
    return out;
  }

  bool transfers(std::size_t r, std::size_t a) const {
    for (std::size_t ae : aw_.receives[a]) {
      auto cands = recv_candidates(r, ae);
      if (std::none_of(cands.begin(), cands.end(), [&](std::size_t re) {
            return related(r_.edges[re].to, a_.edges[ae].to);
          })) {
        return false;
      }
    }
    for (std::size_t re : r_.out[r]) {
      const auto& edge = r_.edges[re];
      if (edge.silent()) {
        const auto& clo = aw_.closure[a];
        if (std::none_of(clo.begin(), clo.end(),
                         [&](std::size_t a2) { return related(edge.to, a2); })) {
          return false;
        }
      } else if (edge.step.is_send()) {
        auto cands = send_candidates(a, re);
        if (std::none_of(cands.begin(), cands.end(), [&](std::size_t ae) {
              return related(edge.to, a_.edges[ae].to);
            })) {
          return false;
        }
      }
    }
    return true;
  }

  struct Visit {
    std::size_t r, a;
    std::size_t parent;
    std::vector<Step> r_steps, a_steps;  // from the parent pair
  };

  // Breadth-first descent from the initial pair through unrelated pairs.
  // A failure with no label-matching move at all is where the systems
  // really differ; the rest only inherit it.
  std::vector<Counterexample> counterexamples() const {
    std::vector<Visit> visits;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<Counterexample> found;
    std::set<std::tuple<int, std::uint32_t, std::uint32_t, FileId>> reported;

    auto push = [&](std::size_t r, std::size_t a, std::size_t parent, std::vector<Step> rs,
                    std::vector<Step> as) {
      if (related(r, a) || !seen.emplace(r, a).second) return;
      visits.push_back({r, a, parent, std::move(rs), std::move(as)});
    };
    auto paths = [&](std::size_t i) {
      std::vector<Step> rp, ap;
      for (std::size_t v = i; v != static_cast<std::size_t>(-1); v = visits[v].parent) {
        rp.insert(rp.begin(), visits[v].r_steps.begin(), visits[v].r_steps.end());
        ap.insert(ap.begin(), visits[v].a_steps.begin(), visits[v].a_steps.end());
      }
      return std::make_pair(rp, ap);
    };
    auto report = [&](std::size_t i, Counterexample::Requirement req, const Step& action) {
      auto key = std::make_tuple(static_cast<int>(req), action.span.begin, action.span.end,
                                 action.span.file);
      if (!reported.insert(key).second) return;
      Counterexample cx;
      cx.requirement = req;
      cx.refined_state = visits[i].r;
      cx.abstract_state = visits[i].a;
      std::tie(cx.refined_path, cx.abstract_path) = paths(i);
      cx.action = action;
      found.push_back(std::move(cx));
    };

    push(r_.initial, a_.initial, static_cast<std::size_t>(-1), {}, {});
    for (std::size_t i = 0; i < visits.size(); ++i) {
      const std::size_t r = visits[i].r, a = visits[i].a;
      for (std::size_t ae : aw_.receives[a]) {
        const auto& aedge = a_.edges[ae];
        auto cands = recv_candidates(r, ae);
        if (cands.empty()) {
          report(i, Counterexample::Requirement::Offers, aedge.step);
          continue;
        }
        for (std::size_t re : cands) {
          const auto& redge = r_.edges[re];
          auto rs = silent_path(r_, r, redge.from);
          rs.push_back(redge.step);
          auto as = silent_path(a_, a, aedge.from);
          as.push_back(aedge.step);
          push(redge.to, aedge.to, i, std::move(rs), std::move(as));
        }
      }
      for (std::size_t re : r_.out[r]) {
        const auto& redge = r_.edges[re];
        if (redge.silent()) {
          // Prefer the abstract side taking the very same internal step.
          std::vector<std::size_t> targets;
          for (std::size_t ae : a_.out[a]) {
            if (a_.edges[ae].step == redge.step) targets.push_back(ae);
          }
          if (targets.empty()) {
            push(redge.to, a, i, {redge.step}, {});
          }
          for (std::size_t ae : targets) push(redge.to, a_.edges[ae].to, i, {redge.step}, {a_.edges[ae].step});
        } else if (redge.step.is_send()) {
          auto cands = send_candidates(a, re);
          if (cands.empty()) {
            report(i, Counterexample::Requirement::Demands, redge.step);
            continue;
          }
          for (std::size_t ae : cands) {
            const auto& aedge = a_.edges[ae];
            auto as = silent_path(a_, a, aedge.from);
            as.push_back(aedge.step);
            push(redge.to, aedge.to, i, {redge.step}, std::move(as));
          }
        }
      }
    }
    return found;
  }

  const ObservableLTS& r_;
  const ObservableLTS& a_;
  WeakMoves rw_;
  WeakMoves aw_;
  std::vector<char> rel_;
};

// True if some reachable state lies on a cycle of silent edges.
bool diverges(const ObservableLTS& lts) {
  std::vector<int> indegree(lts.states, 0);
  for (const auto& e : lts.edges) {
    if (e.silent()) ++indegree[e.to];
  }
  std::deque<std::size_t> work;
  for (std::size_t s = 0; s < lts.states; ++s) {
    if (indegree[s] == 0) work.push_back(s);
  }
  std::size_t removed = 0;
  while (!work.empty()) {
    std::size_t s = work.front();
    work.pop_front();
    ++removed;
    for (std::size_t e : lts.out[s]) {
      if (lts.edges[e].silent() && --indegree[lts.edges[e].to] == 0) {
        work.push_back(lts.edges[e].to);
      }
    }
  }
  return removed != lts.states;
}

}  // namespace

SimulationResult weak_alt_sim(const ObservableLTS& refined, const ObservableLTS& abstract) {
  Simulation sim(refined, abstract);
  sim.solve();
  return sim.result();
}

std::vector<Diagnostic> check_compliance(const ResolvedSystem& refined,
                                         const ResolvedSystem& abstract,
                                         const CheckOptions& options) {
  ObservableLTS r = observable_lts(refined, options);
  ObservableLTS a = observable_lts(abstract, options);
  if (!r.complete || !a.complete) {
    std::vector<Diagnostic> out = r.diagnostics;
    out.insert(out.end(), a.diagnostics.begin(), a.diagnostics.end());
    return out;
  }

  std::vector<Diagnostic> out;
  SimulationResult sim = weak_alt_sim(r, a);
  for (const auto& cx : sim.counterexamples) {
    const Step& s = cx.action;
    Diagnostic d;
    if (cx.requirement == Counterexample::Requirement::Offers) {
      d = make_diagnostic(
          DiagKind::MissingOffer, s.span,
          fmt::format("unmet obligation of {} required by {}: {} no longer accepts `{}` from {}",
                      abstract.name, refined.name, s.actor, s.label, s.peer));
      d.witness = cx.abstract_path;
      d.notes.push_back(Note{refined.decl->name_span, fmt::format("{} declared here", refined.name)});
    } else {
      d = make_diagnostic(DiagKind::ExcessDemand, s.span,
                          fmt::format("{} sends `{}` to {}, which {} never demands at this point",
                                      s.actor, s.label, s.peer, abstract.name));
      d.witness = cx.refined_path;
      d.notes.push_back(
          Note{abstract.decl->name_span, fmt::format("abstraction {} declared here", abstract.name)});
    }
    d.system = refined.name;
    out.push_back(std::move(d));
  }

  if (diverges(r)) {
    auto d = make_diagnostic(DiagKind::DivergenceWarning, refined.decl->name_span,
                             fmt::format("{} can run internal steps forever without any "
                                         "observable action",
                                         refined.name));
    d.severity = Severity::Warning;
    d.system = refined.name;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace objcheck
