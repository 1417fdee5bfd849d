#pragma once

#include "objcheck/automaton.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace objcheck {

using AutomatonPtr = std::shared_ptr<const ObjectAutomaton>;

/// Members of a composite. Composing composites flattens member sets, so
/// grouping never matters.
struct CompositeSpec {
  std::vector<AutomatonPtr> members;

  /// Union of two member sets. Throws std::invalid_argument when they overlap.
  static CompositeSpec merge(const CompositeSpec& a, const CompositeSpec& b);
};

enum class Scope { Internal, External };

/// Internal iff both endpoints are members.
Scope classify(const Action& action, const std::set<std::string>& members);

/// A send and a receive that can synchronise: complementary endpoints, same
/// label, same arity.
bool rendezvous_match(const Action& send, const Action& recv);

/// A transition of the synchronous product: either a rendezvous between two
/// members (rendered as τ) or an external action of one member.
struct SyncLabel {
  Scope scope = Scope::External;
  Action action;  // for rendezvous: the send, carrying the transferred payload

  std::string to_string() const;
};

using CompositeState = std::vector<LocalState>;  // indexed like member_names()

struct CompositeTransition {
  SyncLabel label;
  CompositeState next;
};

class CompositeAutomaton {
 public:
  /// Throws std::invalid_argument on an empty or overlapping member set.
  explicit CompositeAutomaton(CompositeSpec spec);

  const std::vector<std::string>& member_names() const { return names_; }
  const std::set<std::string>& members() const { return member_set_; }
  const ObjectAutomaton& member(std::size_t i) const { return *spec_.members[i]; }

  CompositeState initial() const;
  /// Rendezvous pairs first in member order, then external actions. Internal
  /// actions without a partner in this state produce nothing.
  std::vector<CompositeTransition> successors(const CompositeState& state) const;

 private:
  CompositeSpec spec_;
  std::vector<std::string> names_;
  std::set<std::string> member_set_;
};

CompositeAutomaton compose(CompositeSpec spec);

/// Reachable part of a synchronous product.
struct ProductGraph {
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    SyncLabel label;
  };

  std::vector<CompositeState> states;  // states[0] is initial
  std::vector<Edge> edges;
  bool complete = true;  // false when the state limit cut exploration short
};

ProductGraph explore_product(const CompositeAutomaton& automaton, std::size_t max_states);

std::string to_dot(const ProductGraph& graph, const std::string& name);

}  // namespace objcheck
