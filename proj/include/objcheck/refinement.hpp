#pragma once

#include "objcheck/diagnostic.hpp"
#include "objcheck/explore.hpp"
#include "objcheck/resolve.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace objcheck {

/// The reachable configurations of a system seen from outside: internal
/// steps are silent, external ones are observable.
struct ObservableLTS {
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    Step step;
    bool silent() const { return step.is_internal(); }
  };

  std::string system;
  std::size_t states = 0;
  std::size_t initial = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> out;
  std::vector<Diagnostic> diagnostics;  // exploration limits
  bool complete = true;

  /// State reached by following `steps` from the initial state.
  std::optional<std::size_t> follow(std::span<const Step> steps) const;
  /// Observable steps as (actor, peer, kind, label, arity) strings, sorted.
  std::vector<std::string> alphabet() const;
  /// States reachable from `s` by silent edges, `s` included, in BFS order.
  std::vector<std::size_t> silent_closure(std::size_t s) const;
};

ObservableLTS observable_lts(const Exploration& ex);
ObservableLTS observable_lts(const ResolvedSystem& system, const CheckOptions& options = {});

/// Observable steps agree on actor, peer, direction, label and arity, and
/// their payloads are compatible value by value.
bool observably_matches(const Step& a, const Step& b);

struct Counterexample {
  enum class Requirement { Offers, Demands };

  Requirement requirement = Requirement::Offers;
  std::size_t refined_state = 0;
  std::size_t abstract_state = 0;
  std::vector<Step> refined_path;   // from the refined initial state
  std::vector<Step> abstract_path;  // from the abstract initial state
  // Offers: the abstract receive (after silent moves) the refined side cannot
  // match. Demands: the refined send the abstract side never performs.
  Step action;
};

struct SimulationResult {
  bool holds = false;
  std::vector<std::pair<std::size_t, std::size_t>> relation;  // (refined, abstract), sorted
  std::vector<Counterexample> counterexamples;                // empty when holds
};

/// Largest weak alternating simulation: the refined side offers at least
/// every receive the abstract side offers and sends nothing the abstract side
/// could not send, with silent steps matched by silent steps.
SimulationResult weak_alt_sim(const ObservableLTS& refined, const ObservableLTS& abstract);

/// Compliance of `refined` with its declared abstraction.
std::vector<Diagnostic> check_compliance(const ResolvedSystem& refined,
                                         const ResolvedSystem& abstract,
                                         const CheckOptions& options = {});

}  // namespace objcheck
