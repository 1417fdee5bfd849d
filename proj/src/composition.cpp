#include "objcheck/composition.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace objcheck {

CompositeSpec CompositeSpec::merge(const CompositeSpec& a, const CompositeSpec& b) {
  CompositeSpec out = a;
  for (const auto& m : b.members) {
    for (const auto& existing : a.members) {
      if (existing->name() == m->name()) {
        throw std::invalid_argument(
            fmt::format("`{}` belongs to both composites being composed", m->name()));
      }
    }
    out.members.push_back(m);
  }
  return out;
}

Scope classify(const Action& action, const std::set<std::string>& members) {
  return members.contains(action.subject) && members.contains(action.peer) ? Scope::Internal
                                                                            : Scope::External;
}

bool rendezvous_match(const Action& send, const Action& recv) {
  return send.direction == Direction::Send && recv.direction == Direction::Receive &&
         send.peer == recv.subject && recv.peer == send.subject && send.label == recv.label &&
         send.arity == recv.arity;
}

namespace {

std::string payload_text(const std::vector<Value>& payload) {
  if (payload.empty()) return {};
  std::string out = "(";
  for (std::size_t i = 0; i < payload.size(); ++i) {
    if (i) out += ", ";
    out += payload[i].to_string();
  }
  return out + ")";
}

}  // namespace

std::string SyncLabel::to_string() const {
  if (scope == Scope::Internal) {
    return fmt::format("τ: {}→{}:{}{}", action.subject, action.peer, action.label,
                       payload_text(action.payload));
  }
  if (action.direction == Direction::Send) {
    return fmt::format("{}{}!{}", action.subject, action.peer, action.label);
  }
  return fmt::format("{}{}?{}", action.peer, action.subject, action.label);
}

CompositeAutomaton::CompositeAutomaton(CompositeSpec spec) : spec_(std::move(spec)) {
  if (spec_.members.empty()) throw std::invalid_argument("a composite needs at least one member");
  std::sort(spec_.members.begin(), spec_.members.end(),
            [](const auto& a, const auto& b) { return a->name() < b->name(); });
  for (const auto& m : spec_.members) {
    if (!member_set_.insert(m->name()).second) {
      throw std::invalid_argument(fmt::format("`{}` appears twice in a composite", m->name()));
    }
    names_.push_back(m->name());
  }
}

CompositeState CompositeAutomaton::initial() const {
  CompositeState s;
  for (const auto& m : spec_.members) s.push_back(m->initial());
  return s;
}

std::vector<CompositeTransition> CompositeAutomaton::successors(const CompositeState& state) const {
  std::vector<CompositeTransition> out;
  const std::size_t n = spec_.members.size();
  std::vector<std::vector<LocalStep>> local(n);
  for (std::size_t i = 0; i < n; ++i) local[i] = spec_.members[i]->successors(state[i]);

  auto index_of = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::lower_bound(names_.begin(), names_.end(), name) - names_.begin());
  };

  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& step : local[i]) {
      if (step.action.direction != Direction::Send ||
          classify(step.action, member_set_) != Scope::Internal) {
        continue;
      }
      std::size_t j = index_of(step.action.peer);
      for (const auto& partner : local[j]) {
        if (!rendezvous_match(step.action, partner.action)) continue;
        CompositeState next = state;
        next[i] = step.next;
        next[j] = spec_.members[j]->receive(state[j], partner.branch, step.action.payload);
        out.push_back(CompositeTransition{SyncLabel{Scope::Internal, step.action}, std::move(next)});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& step : local[i]) {
      if (classify(step.action, member_set_) != Scope::External) continue;
      CompositeState next = state;
      next[i] = step.next;
      out.push_back(CompositeTransition{SyncLabel{Scope::External, step.action}, std::move(next)});
    }
  }
  return out;
}

CompositeAutomaton compose(CompositeSpec spec) { return CompositeAutomaton(std::move(spec)); }

namespace {

struct StateHash {
  std::size_t operator()(const CompositeState& s) const {
    std::size_t h = s.size();
    for (const auto& l : s) h = h * 31 + hash_value(l);
    return h;
  }
};

}  // namespace

ProductGraph explore_product(const CompositeAutomaton& automaton, std::size_t max_states) {
  ProductGraph g;
  std::unordered_map<CompositeState, std::size_t, StateHash> index;
  g.states.push_back(automaton.initial());
  index.emplace(g.states.front(), 0);
  for (std::size_t cur = 0; cur < g.states.size(); ++cur) {
    for (auto& t : automaton.successors(g.states[cur])) {
      auto it = index.find(t.next);
      if (it == index.end()) {
        if (g.states.size() >= max_states) {
          g.complete = false;
          continue;
        }
        it = index.emplace(t.next, g.states.size()).first;
        g.states.push_back(std::move(t.next));
      }
      g.edges.push_back(ProductGraph::Edge{cur, it->second, std::move(t.label)});
    }
  }
  return g;
}

std::string to_dot(const ProductGraph& graph, const std::string& name) {
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out;
  };
  std::ostringstream out;
  out << "digraph \"" << escape(name) << "\" {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=circle, label=\"\"];\n";
  out << "  init [shape=point];\n";
  for (std::size_t i = 0; i < graph.states.size(); ++i) {
    out << "  s" << i << " [xlabel=\"" << i << "\"];\n";
  }
  out << "  init -> s0;\n";
  for (const auto& e : graph.edges) {
    out << "  s" << e.from << " -> s" << e.to << " [label=\"" << escape(e.label.to_string())
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace objcheck
