#pragma once

#include "objcheck/composition.hpp"
#include "objcheck/diagnostic.hpp"
#include "objcheck/resolve.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace objcheck {

struct CheckOptions {
  std::size_t queue_bound = 2;
  std::size_t max_configs = 100000;
  std::size_t invoke_depth = 1000;
};

/// A send or receive branch, identified by member, program point and branch.
struct SiteId {
  std::uint32_t member = 0;
  std::uint32_t point = 0;
  std::uint32_t branch = 0;

  friend auto operator<=>(const SiteId&, const SiteId&) = default;
};

struct Message {
  std::string label;
  std::vector<Value> payload;
  SiteId origin;
  Span span;  // label of the send that produced it

  friend bool operator==(const Message&, const Message&) = default;
};

/// Local states of every member plus one FIFO queue per ordered pair of
/// members. External channels have no queue.
struct Configuration {
  std::vector<LocalState> locals;
  std::vector<std::vector<Message>> queues;  // channel (s, r) lives at s * n + r

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

std::size_t hash_value(const Configuration& c);

/// The asynchronous semantics of a resolved system: internal sends enqueue,
/// internal receives read the head of one sender's queue, external sends are
/// dropped and external receives never block.
class AsyncSystem {
 public:
  AsyncSystem(const ResolvedSystem& system, const CheckOptions& options);

  struct Successor {
    Step step;
    Configuration next;
    std::size_t mover = 0;
    std::optional<std::size_t> dequeued;  // channel read by an internal receive
  };

  /// Something that blocked a transition rather than producing one.
  struct Blocked {
    enum class Why { QueueFull, ArityMismatch };
    Why why = Why::QueueFull;
    std::size_t member = 0;
    SiteId site;        // the send (full queue) or the queued message's origin
    Span span;
    Span receive_span;  // arity mismatch only: the receive branch
    std::string label;
  };

  const std::string& name() const { return name_; }
  std::size_t size() const { return automata_.size(); }
  const std::vector<std::string>& member_names() const { return names_; }
  const ObjectAutomaton& member(std::size_t i) const { return *automata_[i]; }
  std::optional<std::size_t> index_of(std::string_view participant) const;
  std::size_t channel(std::size_t sender, std::size_t receiver) const {
    return sender * automata_.size() + receiver;
  }
  std::size_t queue_bound() const { return options_.queue_bound; }

  /// Throws InvokeDepthError.
  Configuration initial() const;
  /// Enabled steps in canonical order: members by name, then branch order.
  std::vector<Successor> successors(const Configuration& c,
                                    std::vector<Blocked>* blocked = nullptr) const;

  /// Follows `steps` from the initial configuration; nullopt if one is not
  /// enabled.
  std::optional<Configuration> replay(std::span<const Step> steps) const;

 private:
  std::string name_;
  CheckOptions options_;
  std::vector<std::string> names_;
  std::vector<AutomatonPtr> automata_;
};

/// Explored configuration space. Configurations are numbered in BFS order so
/// the tree of first-discovery edges gives shortest witnesses.
struct ReachGraph {
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    Step step;
    std::size_t mover = 0;
    std::optional<std::size_t> dequeued;
  };

  std::vector<Configuration> configs;
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> out;  // edge ids per configuration
  std::vector<std::size_t> parent;            // first-discovery edge; npos for the initial

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<Step> path_to(std::size_t config) const;
  std::vector<std::size_t> edge_path_to(std::size_t config) const;
  std::optional<std::size_t> find(const Configuration& c) const;
};

struct Exploration {
  std::shared_ptr<const AsyncSystem> system;
  ReachGraph graph;
  std::vector<Diagnostic> diagnostics;  // queue overflow, arity mismatch, limits
  bool complete = true;                 // false after overflow or a limit
};

Exploration explore(const ResolvedSystem& system, const CheckOptions& options);

struct Trace {
  std::vector<Step> steps;
  Configuration final;
};

/// Random walk resolving every choice with a seeded generator. The same seed
/// always yields the same trace.
Trace simulate(const ResolvedSystem& system, std::uint64_t seed, std::size_t max_steps,
               const CheckOptions& options = {});

}  // namespace objcheck
