#include "objcheck/cli.hpp"

#include "objcheck/composition.hpp"
#include "objcheck/render.hpp"
#include "objcheck/workspace.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace objcheck {

namespace {

constexpr int kClean = 0;
constexpr int kReported = 1;
constexpr int kUsage = 2;

struct Args {
  std::vector<std::string> files;
  std::vector<std::string> systems;
  std::string system;
  std::string format = "human";
  bool json = false;
  bool show_info = false;
  std::uint64_t seed = 0;
  std::size_t steps = 100;
  std::string dot;
  CheckOptions check;
};

bool use_color(std::ostream& err, bool out_is_tty) {
  const char* env = std::getenv("OBJCHECK_COLOR");
  std::string mode = env ? env : "auto";
  if (mode == "always") return true;
  if (mode == "never") return false;
  if (mode != "auto") err << fmt::format("warning: ignoring OBJCHECK_COLOR={}\n", mode);
  return out_is_tty;
}

std::vector<Diagnostic> visible(const std::vector<Diagnostic>& diags, bool show_info) {
  if (show_info) return diags;
  std::vector<Diagnostic> out;
  std::copy_if(diags.begin(), diags.end(), std::back_inserter(out),
               [](const Diagnostic& d) { return d.counts(); });
  return out;
}

// Loads every file; false (after reporting) if one cannot be read.
bool load(Workspace& ws, const std::vector<std::string>& files, std::ostream& err) {
  for (const auto& f : files) {
    if (!ws.add_file(f)) {
      err << fmt::format("error: cannot read `{}`\n", f);
      return false;
    }
  }
  return true;
}

bool known_system(const Workspace& ws, const std::string& name, std::ostream& err) {
  auto names = ws.system_names();
  if (std::binary_search(names.begin(), names.end(), name)) return true;
  err << fmt::format("error: no system named `{}` in the given files\n", name);
  return false;
}

void emit(std::ostream& out, const std::vector<Diagnostic>& diags, const Workspace& ws,
          std::size_t verified, const Args& a, bool color) {
  if (a.json || a.format == "json") {
    out << render_json(diags, ws.sources);
  } else {
    out << render_human(diags, ws.sources, verified, RenderOptions{color});
  }
}

int cmd_check(const Args& a, std::ostream& out, std::ostream& err, bool color) {
  Workspace ws;
  if (!load(ws, a.files, err)) return kUsage;
  if (ws.diagnostics.empty()) {
    for (const auto& s : a.systems) {
      if (!known_system(ws, s, err)) return kUsage;
    }
  }
  CheckReport report = check_workspace(ws, a.check, a.systems);
  emit(out, visible(report.diagnostics, a.show_info), ws, report.systems_checked, a, color);
  return report.errors() == 0 ? kClean : kReported;
}

// Resolves the --system argument, reporting diagnostics if that fails.
ResolvedSystemPtr prepare(Workspace& ws, const Args& a, std::ostream& out, std::ostream& err,
                          bool color, int& status) {
  status = kUsage;
  if (!load(ws, a.files, err)) return nullptr;
  if (!ws.diagnostics.empty()) {
    auto diags = ws.diagnostics;
    sort_diagnostics(diags, ws.sources);
    emit(out, diags, ws, 0, a, color);
    status = kReported;
    return nullptr;
  }
  if (!known_system(ws, a.system, err)) return nullptr;
  ResolveResult r = ws.resolve_system(a.system);
  if (!r.system) {
    sort_diagnostics(r.diagnostics, ws.sources);
    emit(out, r.diagnostics, ws, 0, a, color);
    status = kReported;
    return nullptr;
  }
  status = kClean;
  return r.system;
}

std::string where(const SourceSet& sources, const Span& span) {
  return fmt::format("{}:{}:{}", sources.file(span.file).path, span.start_line, span.start_col);
}

int cmd_simulate(const Args& a, std::ostream& out, std::ostream& err, bool color) {
  Workspace ws;
  int status = kUsage;
  ResolvedSystemPtr sys = prepare(ws, a, out, err, color, status);
  if (!sys) return status;

  Trace trace;
  try {
    trace = simulate(*sys, a.seed, a.steps, a.check);
  } catch (const InvokeDepthError& e) {
    err << fmt::format("error: {}: {}\n", where(ws.sources, e.span), e.what());
    return kReported;
  }
  AsyncSystem async(*sys, a.check);

  if (a.json || a.format == "json") {
    nlohmann::ordered_json doc;
    doc["system"] = sys->name;
    doc["seed"] = a.seed;
    doc["steps"] = nlohmann::ordered_json::array();
    for (const auto& s : trace.steps) {
      nlohmann::ordered_json j;
      j["actor"] = s.actor;
      j["peer"] = s.peer;
      j["polarity"] = s.is_send() ? "send" : "receive";
      j["label"] = s.label;
      j["payload"] = nlohmann::ordered_json::array();
      for (const auto& v : s.payload) {
        if (v.is_int()) {
          j["payload"].push_back(v.as_int());
        } else if (v.is_string()) {
          j["payload"].push_back(v.as_string());
        } else {
          j["payload"].push_back(nullptr);
        }
      }
      j["internal"] = s.is_internal();
      j["file"] = ws.sources.file(s.span.file).path;
      j["line"] = s.span.start_line;
      j["col"] = s.span.start_col;
      doc["steps"].push_back(j);
    }
    nlohmann::ordered_json finals = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < async.size(); ++i) {
      const auto& local = trace.final.locals[i];
      const auto& m = async.member(i);
      finals[async.member_names()[i]] =
          m.terminated(local) ? std::string("stopped") : where(ws.sources, m.point(local).span);
    }
    doc["final"] = finals;
    out << doc.dump() << "\n";
    return kClean;
  }

  out << fmt::format("simulation of {} (seed {})\n", sys->name, a.seed);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const Step& s = trace.steps[i];
    out << fmt::format("{:>4}. {}  ({})\n", i + 1, describe(s), where(ws.sources, s.span));
  }
  if (trace.steps.empty()) out << "  (no steps)\n";
  out << "final configuration:\n";
  for (std::size_t i = 0; i < async.size(); ++i) {
    const auto& local = trace.final.locals[i];
    const auto& m = async.member(i);
    std::string env;
    for (const auto& [name, value] : local.env) {
      env += fmt::format("{}{}={}", env.empty() ? " {" : ", ", name, value.to_string());
    }
    if (!env.empty()) env += "}";
    out << fmt::format("  {}: {}{}\n", async.member_names()[i],
                       m.terminated(local) ? "stopped" : "at " + where(ws.sources, m.point(local).span),
                       env);
  }
  for (std::size_t s = 0; s < async.size(); ++s) {
    for (std::size_t r = 0; r < async.size(); ++r) {
      const auto& q = trace.final.queues[async.channel(s, r)];
      if (q.empty()) continue;
      std::vector<std::string> labels;
      for (const auto& m : q) labels.push_back(m.label);
      out << fmt::format("  queue {} -> {}: [{}]\n", async.member_names()[s],
                         async.member_names()[r], fmt::join(labels, ", "));
    }
  }
  return kClean;
}

int cmd_lts(const Args& a, std::ostream& out, std::ostream& err, bool color) {
  Workspace ws;
  int status = kUsage;
  ResolvedSystemPtr sys = prepare(ws, a, out, err, color, status);
  if (!sys) return status;
  if (sys->objects.empty()) {
    err << fmt::format("error: system `{}` has no objects\n", sys->name);
    return kUsage;
  }

  ProductGraph graph;
  try {
    CompositeSpec spec;
    for (const auto& [name, decl] : sys->objects) {
      spec.members.push_back(std::make_shared<const ObjectAutomaton>(
          build_automaton(decl, AutomatonOptions{a.check.invoke_depth})));
    }
    graph = explore_product(compose(std::move(spec)), a.check.max_configs);
  } catch (const InvokeDepthError& e) {
    err << fmt::format("error: {}: {}\n", where(ws.sources, e.span), e.what());
    return kReported;
  }

  std::string dot = to_dot(graph, sys->name);
  if (a.dot == "-") {
    out << dot;
  } else {
    std::ofstream file(a.dot, std::ios::binary);
    if (!(file << dot)) {
      err << fmt::format("error: cannot write `{}`\n", a.dot);
      return kUsage;
    }
  }
  if (!graph.complete) {
    err << fmt::format("warning: state limit of {} reached; the graph is partial\n",
                       a.check.max_configs);
    return kReported;
  }
  return kClean;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        bool out_is_tty) {
  Args a;
  CLI::App app{"Compatibility and compliance checker for object systems", "objcheck"};
  app.require_subcommand(1);

  auto add_bounds = [&](CLI::App* cmd) {
    cmd->add_option("-k,--queue-bound", a.check.queue_bound, "Capacity of each internal queue")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-configs", a.check.max_configs, "Exploration limit")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--invoke-depth", a.check.invoke_depth, "Nested invocation limit")
        ->check(CLI::PositiveNumber);
  };
  auto add_format = [&](CLI::App* cmd) {
    auto* fmt_opt = cmd->add_option("--format", a.format, "Output format")
                        ->check(CLI::IsMember({"human", "json"}));
    cmd->add_flag("--json", a.json, "Same as --format json")->excludes(fmt_opt);
  };

  auto* check = app.add_subcommand("check", "Check every system in the given files");
  check->add_option("files", a.files, "Source files")->required();
  check->add_option("-s,--system", a.systems, "Only check these systems");
  check->add_flag("--show-info", a.show_info, "Also print informational diagnostics");
  add_bounds(check);
  add_format(check);

  auto* sim = app.add_subcommand("simulate", "Print one random run of a system");
  sim->add_option("files", a.files, "Source files")->required();
  sim->add_option("-s,--system", a.system, "System to run")->required();
  sim->add_option("--seed", a.seed, "Scheduler seed");
  sim->add_option("--steps", a.steps, "Maximum number of steps");
  add_bounds(sim);
  add_format(sim);

  auto* lts = app.add_subcommand("lts", "Write the synchronous product as a DOT graph");
  lts->add_option("files", a.files, "Source files")->required();
  lts->add_option("-s,--system", a.system, "System to export")->required();
  lts->add_option("--dot", a.dot, "Output path, or - for standard output")->required();
  add_bounds(lts);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kClean : kUsage;
  }

  bool color = use_color(err, out_is_tty);
  if (check->parsed()) return cmd_check(a, out, err, color);
  if (sim->parsed()) return cmd_simulate(a, out, err, color);
  return cmd_lts(a, out, err, color);
}

}  // namespace objcheck
