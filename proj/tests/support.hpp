#pragma once

#include "objcheck/workspace.hpp"

#include <doctest.h>

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

namespace testing {

inline std::string fixture(const std::string& name) {
  return std::string(OBJCHECK_FIXTURES) + "/" + name;
}

inline const std::vector<std::string>& all_fixture_files() {
  static const std::vector<std::string> files = {
      "dev.obj",          "dev-refactored.obj", "dev-fixed.obj", "dev-refactored-fixed.obj",
      "dev-extended.obj", "repo.obj",           "repo-test.obj", "discard.obj",
      "fig5.obj"};
  return files;
}

inline objcheck::Workspace load(std::initializer_list<std::string> names) {
  objcheck::Workspace ws;
  for (const auto& n : names) REQUIRE(ws.add_file(fixture(n)));
  REQUIRE(ws.diagnostics.empty());
  return ws;
}

inline objcheck::Workspace load_all() {
  objcheck::Workspace ws;
  for (const auto& n : all_fixture_files()) REQUIRE(ws.add_file(fixture(n)));
  REQUIRE(ws.diagnostics.empty());
  return ws;
}

inline objcheck::Workspace from_text(const std::string& text) {
  objcheck::Workspace ws;
  ws.add_source("input.obj", text);
  return ws;
}

inline objcheck::ResolvedSystemPtr resolved(const objcheck::Workspace& ws, const std::string& name) {
  auto r = ws.resolve_system(name);
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.system);
  return r.system;
}

inline std::vector<objcheck::Diagnostic> counted(const std::vector<objcheck::Diagnostic>& ds) {
  std::vector<objcheck::Diagnostic> out;
  std::copy_if(ds.begin(), ds.end(), std::back_inserter(out),
               [](const objcheck::Diagnostic& d) { return d.counts(); });
  return out;
}

inline std::string text_at(const objcheck::Workspace& ws, const objcheck::Span& span) {
  return std::string(ws.sources.slice(span));
}

}  // namespace testing
