#pragma once

#include "objcheck/ast.hpp"
#include "objcheck/diagnostic.hpp"

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace objcheck {

/// A system with its imports flattened: every object it runs, and the
/// participants it talks to without defining.
struct ResolvedSystem {
  std::string name;
  SystemDeclPtr decl;
  std::map<std::string, std::shared_ptr<const ObjectDecl>> objects;
  std::map<std::string, std::string> owner;  // object name -> declaring system
  std::set<std::string> externals;
  std::shared_ptr<const ResolvedSystem> parent;

  bool is_member(std::string_view participant) const {
    return objects.find(std::string(participant)) != objects.end();
  }
};

using ResolvedSystemPtr = std::shared_ptr<const ResolvedSystem>;

struct ResolveResult {
  ResolvedSystemPtr system;  // null iff diagnostics is non-empty
  std::vector<Diagnostic> diagnostics;
};

/// Resolves `root` against the declarations of a workspace. The result does
/// not depend on the order of `decls`.
ResolveResult resolve(std::span<const SystemDeclPtr> decls, std::string_view root);

/// Participants referenced as a peer anywhere in `obj`.
std::set<std::string> peers_of(const ObjectDecl& obj);

}  // namespace objcheck
