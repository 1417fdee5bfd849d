#pragma once

#include "objcheck/ast.hpp"
#include "objcheck/diagnostic.hpp"
#include "objcheck/explore.hpp"
#include "objcheck/resolve.hpp"
#include "objcheck/source.hpp"

#include <optional>
#include <string>
#include <vector>

namespace objcheck {

/// Every source file of a run together with the systems they declare.
struct Workspace {
  SourceSet sources;
  std::vector<SystemDeclPtr> systems;
  std::vector<Diagnostic> diagnostics;  // syntax errors

  /// Parses `text` as another file of the workspace.
  void add_source(std::string path, std::string text);
  /// Reads and parses a file; false if it cannot be read.
  bool add_file(const std::string& path);

  std::vector<std::string> system_names() const;  // sorted
  ResolveResult resolve_system(std::string_view name) const;
};

struct CheckReport {
  std::vector<Diagnostic> diagnostics;  // sorted
  std::size_t systems_checked = 0;

  std::size_t errors() const { return count_errors(diagnostics); }
};

/// Compatibility of every system (or of `roots` only) and compliance of every
/// `system X: Y` among them.
CheckReport check_workspace(const Workspace& ws, const CheckOptions& options,
                            const std::vector<std::string>& roots = {});

}  // namespace objcheck
