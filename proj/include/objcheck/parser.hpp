#pragma once

#include "objcheck/ast.hpp"
#include "objcheck/diagnostic.hpp"

#include <string_view>
#include <vector>

namespace objcheck {

struct ParseResult {
  std::vector<SystemDeclPtr> systems;  // empty whenever diagnostics is non-empty
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Parses and validates one `.obj` source. A file holds one or more systems.
/// Either every system is returned, or only diagnostics.
ParseResult parse(std::string_view text, FileId file);

/// Renders declarations back to concrete syntax that re-parses to a
/// structurally identical result.
std::string pretty_print(const SystemDecl& system);
std::string pretty_print(const Proc& proc);

}  // namespace objcheck
