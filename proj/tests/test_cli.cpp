#include "objcheck/cli.hpp"
#include "objcheck/render.hpp"

#include "support.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace objcheck;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Column (0-based) of `needle` in the excerpt row directly above the row
// holding `marker`.
void expect_underline(const std::string& text, const std::string& token, const std::string& marker) {
  auto ls = lines(text);
  bool found = false;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    auto m = ls[i].find(marker);
    if (m == std::string::npos) continue;
    std::string source = ls[i - 1];
    CHECK(source.substr(m, token.size()) == token);
    found = true;
  }
  CHECK(found);
}

class ColorEnv {
 public:
  explicit ColorEnv(const char* value) { setenv("OBJCHECK_COLOR", value, 1); }
  ~ColorEnv() { unsetenv("OBJCHECK_COLOR"); }
};

}  // namespace

TEST_CASE("human rendering of Fig 1") {
  auto ws = testing::load({"dev.obj"});
  auto report = check_workspace(ws, {});
  auto shown = testing::counted(report.diagnostics);
  std::string text = render_human(shown, ws.sources, report.systems_checked);
  expect_underline(text, "stop", "~~~~ [send]");
  expect_underline(text, "continue", "~~~~~~~~ [recv]");
  CHECK(text.find("dev.obj:15:20: error[UndeliverableSend] in dev") != std::string::npos);
  CHECK(text.find("  witness:\n    1. ") != std::string::npos);
  CHECK(text.find("2 error(s), 0 warning(s)") != std::string::npos);
}

TEST_CASE("human rendering of compliance errors names both systems") {
  auto ws = testing::load({"dev.obj", "dev-refactored.obj"});
  auto report = check_workspace(ws, {}, {"dev-refactored"});
  std::string text = render_human(report.diagnostics, ws.sources, report.systems_checked);
  expect_underline(text, "iterate", "^^^^^^^ [recv]");
  expect_underline(text, "tagRC", "^^^^^ [send]");
  CHECK(text.find("unmet obligation of dev required by dev-refactored") != std::string::npos);
  CHECK(text.find("~") == std::string::npos);
}

TEST_CASE("clean runs print a summary") {
  SourceSet none;
  CHECK(render_human({}, none, 3) == "ok: 3 system(s) verified\n");
  CHECK(render_json({}, none) == "{\"version\":1,\"diagnostics\":[]}\n");
}

TEST_CASE("colour is opt-in") {
  auto ws = testing::load({"dev.obj"});
  auto report = check_workspace(ws, {});
  CHECK(render_human(report.diagnostics, ws.sources, 1).find('\x1b') == std::string::npos);
  CHECK(render_human(report.diagnostics, ws.sources, 1, RenderOptions{true}).find('\x1b') !=
        std::string::npos);
}

TEST_CASE("JSON for Fig 1 and Fig 3") {
  auto fig1 = testing::load({"dev.obj"});
  auto r1 = check_workspace(fig1, {});
  auto doc1 = nlohmann::json::parse(render_json(testing::counted(r1.diagnostics), fig1.sources));
  REQUIRE(doc1["diagnostics"].size() == 2);
  CHECK(doc1["diagnostics"][0]["kind"] == "UndeliverableSend");
  CHECK(doc1["diagnostics"][0]["class"] == "compatibility");
  CHECK(doc1["diagnostics"][0]["polarity"] == "send");
  CHECK(doc1["diagnostics"][0]["range"]["start"]["line"] == 15);
  CHECK(doc1["diagnostics"][1]["kind"] == "StuckReceive");
  CHECK(doc1["diagnostics"][1]["polarity"] == "receive");

  auto fig3 = testing::load({"repo.obj", "discard.obj"});
  auto r3 = check_workspace(fig3, {}, {"repo-discard-test"});
  auto doc3 = nlohmann::json::parse(render_json(testing::counted(r3.diagnostics), fig3.sources));
  REQUIRE(doc3["diagnostics"].size() == 3);
  std::vector<std::string> kinds;
  for (const auto& d : doc3["diagnostics"]) kinds.push_back(d["kind"]);
  CHECK(std::count(kinds.begin(), kinds.end(), "StuckReceive") == 2);
  CHECK(std::count(kinds.begin(), kinds.end(), "UndeliverableSend") == 1);
  CHECK(std::count(kinds.begin(), kinds.end(), "ExcessDemand") == 0);
}

TEST_CASE("JSON round-trips") {
  auto ws = testing::load_all();
  auto report = check_workspace(ws, {});
  std::string first = render_json(report.diagnostics, ws.sources);
  auto parsed = parse_json(first);
  REQUIRE(parsed);
  CHECK(parsed->diagnostics.size() == report.diagnostics.size());
  CHECK(render_json(parsed->diagnostics, parsed->files) == first);
  for (std::size_t i = 0; i < report.diagnostics.size(); ++i) {
    CHECK(parsed->diagnostics[i].witness.size() == report.diagnostics[i].witness.size());
  }
  CHECK_FALSE(parse_json("not json"));
  CHECK_FALSE(parse_json("{\"version\":2,\"diagnostics\":[]}"));
}

TEST_CASE("exit codes") {
  auto f = testing::fixture;
  CHECK(cli({"check", f("dev.obj")}).code == 1);
  CHECK(cli({"check", f("repo.obj"), f("dev-fixed.obj"), f("repo-test.obj")}).code == 0);
  CHECK(cli({"check", f("missing.obj")}).code == 2);
  CHECK(cli({"check", f("dev.obj"), "--system", "nope"}).code == 2);
  CHECK(cli({"check", f("dev.obj"), "--json", "--format", "human"}).code == 2);
  CHECK(cli({"check", f("dev.obj"), "--queue-bound", "0"}).code == 2);
  CHECK(cli({"check"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("check output") {
  auto f = testing::fixture;
  auto clean = cli({"check", f("repo.obj"), f("dev-fixed.obj"), f("repo-test.obj")});
  CHECK(clean.out == "ok: 3 system(s) verified\n");

  auto fig2 = cli({"check", f("dev.obj"), f("dev-refactored.obj"), "--json"});
  CHECK(fig2.code == 1);
  auto doc = nlohmann::json::parse(fig2.out);
  std::size_t compliance = 0, compatibility = 0;
  for (const auto& d : doc["diagnostics"]) {
    (d["class"] == "compliance" ? compliance : compatibility) += 1;
  }
  CHECK(compliance == 2);
  CHECK(compatibility == 2);

  auto hidden = cli({"check", f("dev.obj")});
  auto shown = cli({"check", f("dev.obj"), "--show-info"});
  CHECK(hidden.out.find("Deadlock") == std::string::npos);
  CHECK(shown.out.find("info[Deadlock]") != std::string::npos);
  CHECK(shown.code == hidden.code);
}

TEST_CASE("syntax errors are diagnostics") {
  auto dir = std::filesystem::temp_directory_path() / "objcheck-cli-test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "broken.obj").string();
  std::ofstream(path) << "system broken\nobj p q ! m\n";
  auto r = cli({"check", path});
  CHECK(r.code == 1);
  CHECK(r.out.find("error[UnterminatedProcess]") != std::string::npos);
}

TEST_CASE("exit code follows the counted diagnostics") {
  auto ws = testing::load_all();
  for (const auto& name : ws.system_names()) {
    std::vector<std::string> args{"check"};
    for (const auto& file : testing::all_fixture_files()) args.push_back(testing::fixture(file));
    args.push_back("--system");
    args.push_back(name);
    auto r = cli(args);
    auto report = check_workspace(ws, {}, {name});
    CHECK(r.code == (report.errors() == 0 ? 0 : 1));
  }
}

TEST_CASE("output is byte-identical across runs") {
  std::vector<std::string> args{"check"};
  for (const auto& file : testing::all_fixture_files()) args.push_back(testing::fixture(file));
  for (const char* format : {"human", "json"}) {
    auto with = args;
    with.push_back("--format");
    with.push_back(format);
    auto first = cli(with).out;
    for (int i = 0; i < 4; ++i) CHECK(cli(with).out == first);
  }
}

TEST_CASE("OBJCHECK_COLOR") {
  auto f = testing::fixture("dev.obj");
  {
    ColorEnv env("always");
    CHECK(cli({"check", f}).out.find('\x1b') != std::string::npos);
  }
  {
    ColorEnv env("never");
    std::ostringstream out, err;
    run({"check", f}, out, err, true);
    CHECK(out.str().find('\x1b') == std::string::npos);
  }
  CHECK(cli({"check", f}).out.find('\x1b') == std::string::npos);
}

TEST_CASE("simulate") {
  auto f = testing::fixture("dev.obj");
  auto a = cli({"simulate", f, "--system", "dev", "--seed", "7", "--steps", "20"});
  auto b = cli({"simulate", f, "--system", "dev", "--seed", "7", "--steps", "20"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("simulation of dev (seed 7)") == 0);
  CHECK(a.out.find("final configuration:") != std::string::npos);

  auto zero = cli({"simulate", f, "--system", "dev", "--steps", "0", "--json"});
  auto doc = nlohmann::json::parse(zero.out);
  CHECK(doc["steps"].empty());
  CHECK(cli({"simulate", f, "--system", "nope"}).code == 2);
  CHECK(cli({"simulate", f}).code == 2);
}

TEST_CASE("lts export") {
  auto f = testing::fixture("fig5.obj");
  auto r = cli({"lts", f, "--system", "cd", "--dot", "-"});
  CHECK(r.code == 0);
  CHECK(r.out.find("digraph \"cd\"") == 0);
  CHECK(r.out.find("τ: p→q:i") != std::string::npos);
  CHECK(r.out.find("ps!i") != std::string::npos);

  auto path = (std::filesystem::temp_directory_path() / "objcheck-cd.dot").string();
  CHECK(cli({"lts", f, "--system", "cd", "--dot", path}).code == 0);
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  CHECK(s.str() == r.out);
  CHECK(cli({"lts", f, "--system", "cd"}).code == 2);
}
