#include "objcheck/workspace.hpp"

#include "objcheck/compat.hpp"
#include "objcheck/parser.hpp"
#include "objcheck/refinement.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace objcheck {

void Workspace::add_source(std::string path, std::string text) {
  FileId id = sources.add(std::move(path), std::move(text));
  ParseResult r = parse(sources.file(id).text, id);
  systems.insert(systems.end(), r.systems.begin(), r.systems.end());
  diagnostics.insert(diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
}

bool Workspace::add_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) return false;
  add_source(path, text.str());
  return true;
}

std::vector<std::string> Workspace::system_names() const {
  std::set<std::string> names;
  for (const auto& s : systems) names.insert(s->name);
  return {names.begin(), names.end()};
}

ResolveResult Workspace::resolve_system(std::string_view name) const {
  return resolve(systems, name);
}

CheckReport check_workspace(const Workspace& ws, const CheckOptions& options,
                            const std::vector<std::string>& roots) {
  CheckReport report;
  report.diagnostics = ws.diagnostics;
  if (!ws.diagnostics.empty()) {
    sort_diagnostics(report.diagnostics, ws.sources);
    return report;
  }

  std::vector<std::string> names = roots.empty() ? ws.system_names() : roots;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  // Resolution errors of shared declarations show up once per system that
  // reaches them; keep one copy.
  auto add_unique = [&](const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds) {
      bool seen = std::any_of(report.diagnostics.begin(), report.diagnostics.end(),
                              [&](const Diagnostic& e) {
                                return e.kind == d.kind && e.span == d.span &&
                                       e.message == d.message && e.system == d.system;
                              });
      if (!seen) report.diagnostics.push_back(d);
    }
  };

  for (const auto& name : names) {
    ResolveResult r = ws.resolve_system(name);
    ++report.systems_checked;
    if (!r.system) {
      add_unique(r.diagnostics);
      continue;
    }
    add_unique(check_compatibility(*r.system, options));
    if (r.system->parent) add_unique(check_compliance(*r.system, *r.system->parent, options));
  }
  sort_diagnostics(report.diagnostics, ws.sources);
  return report;
}

}  // namespace objcheck
