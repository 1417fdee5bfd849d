#pragma once

#include "objcheck/explore.hpp"

#include <vector>

namespace objcheck {

/// Send sites with a queued message that no continuation ever consumes.
std::vector<Diagnostic> find_undeliverable(const Exploration& ex);

/// Receive branches of a choice at which an object can become permanently
/// blocked.
std::vector<Diagnostic> find_stuck_receives(const Exploration& ex);

/// Terminal configurations in which some object has not stopped. A deadlock
/// whose blocked receive is already an error-level StuckReceive is reported at
/// info severity.
std::vector<Diagnostic> find_deadlocks(const Exploration& ex,
                                       const std::vector<Diagnostic>& stuck_receives);

/// Decides compatibility; an empty (error-free) result means compatible.
std::vector<Diagnostic> check_compatibility(const ResolvedSystem& system,
                                            const CheckOptions& options = {});

}  // namespace objcheck
