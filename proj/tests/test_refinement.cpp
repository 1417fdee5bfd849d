#include "objcheck/refinement.hpp"

#include "objcheck/compat.hpp"
#include "oracle.hpp"
#include "support.hpp"

#include <algorithm>

using namespace objcheck;

namespace {

ObservableLTS lts_of(const Workspace& ws, const std::string& name) {
  return observable_lts(*testing::resolved(ws, name));
}

bool refines(const Workspace& ws, const std::string& refined, const std::string& abstract) {
  return weak_alt_sim(lts_of(ws, refined), lts_of(ws, abstract)).holds;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

const char* kDivergent =
    "system spin\n"
    "obj a\nbehaviour L\n  b ! x\n  b ? y\n  L\nL\n"
    "obj b\nbehaviour L\n  a ? x\n  a ! y\n  L\nL\n"
    "system spin2: spin\n"
    "obj a\nbehaviour L\n  b ! x\n  b ? y\n  L\nL\n"
    "obj b\nbehaviour L\n  a ? x\n  a ! y\n  L\nL\n";

}  // namespace

TEST_CASE("observable alphabet of dev-fixed") {
  auto ws = testing::load({"dev-fixed.obj", "dev-refactored.obj", "dev.obj"});
  auto alpha = lts_of(ws, "dev-fixed").alphabet();
  for (const char* a : {"devTeam!repository:commit/0", "devTeam?repository:revision/1",
                        "teamLead!business:evaluate/0", "teamLead?business:iterate/1",
                        "teamLead?business:accept/1", "teamLead!repository:tagRC/1",
                        "teamLead!repository:tagRelease/1"}) {
    CHECK(has(alpha, a));
  }
  CHECK(alpha.size() == 7);

  auto refactored = lts_of(ws, "dev-refactored").alphabet();
  CHECK_FALSE(has(refactored, "teamLead?business:iterate/1"));
  CHECK(has(refactored, "teamLead?business:accept/1"));
}

TEST_CASE("closed systems have only silent edges") {
  auto ws = testing::from_text(kDivergent);
  auto lts = lts_of(ws, "spin");
  CHECK(lts.alphabet().empty());
  for (const auto& e : lts.edges) CHECK(e.silent());
}

TEST_CASE("every fixture refines itself") {
  auto ws = testing::load_all();
  for (const auto& name : ws.system_names()) {
    INFO(name);
    CHECK(refines(ws, name, name));
    auto sys = testing::resolved(ws, name);
    CHECK(check_compliance(*sys, *sys).empty());
  }
}

TEST_CASE("dev-refactored does not comply with dev") {
  auto ws = testing::load({"dev.obj", "dev-refactored.obj"});
  auto refined = testing::resolved(ws, "dev-refactored");
  auto abstract = testing::resolved(ws, "dev");

  auto sim = weak_alt_sim(observable_lts(*refined), observable_lts(*abstract));
  CHECK_FALSE(sim.holds);
  REQUIRE(sim.counterexamples.size() == 2);

  auto ds = check_compliance(*refined, *abstract);
  REQUIRE(ds.size() == 2);
  std::sort(ds.begin(), ds.end(), [](const Diagnostic& a, const Diagnostic& b) { return a.kind < b.kind; });

  const auto& missing = ds[0];
  CHECK(missing.kind == DiagKind::MissingOffer);
  CHECK(missing.polarity() == Polarity::Receive);
  CHECK(ws.sources.file(missing.span.file).path == testing::fixture("dev.obj"));
  CHECK(testing::text_at(ws, missing.span) == "iterate");
  CHECK(missing.message.find("unmet obligation of dev required by dev-refactored") == 0);
  CHECK(missing.system == "dev-refactored");

  const auto& excess = ds[1];
  CHECK(excess.kind == DiagKind::ExcessDemand);
  CHECK(excess.polarity() == Polarity::Send);
  CHECK(ws.sources.file(excess.span.file).path == testing::fixture("dev-refactored.obj"));
  CHECK(testing::text_at(ws, excess.span) == "tagRC");
}

TEST_CASE("counterexamples replay and violate the cited condition") {
  auto ws = testing::load({"dev.obj", "dev-refactored.obj"});
  auto r = lts_of(ws, "dev-refactored");
  auto a = lts_of(ws, "dev");
  auto sim = weak_alt_sim(r, a);
  for (const auto& cx : sim.counterexamples) {
    CHECK(r.follow(cx.refined_path) == std::optional<std::size_t>(cx.refined_state));
    CHECK(a.follow(cx.abstract_path) == std::optional<std::size_t>(cx.abstract_state));
    auto weak = [](const ObservableLTS& lts, std::size_t s, bool send) {
      std::vector<Step> out;
      for (std::size_t c : lts.silent_closure(s)) {
        for (std::size_t e : lts.out[c]) {
          const auto& st = lts.edges[e].step;
          if (!st.is_internal() && st.is_send() == send) out.push_back(st);
        }
      }
      return out;
    };
    auto matches = [&](const std::vector<Step>& steps) {
      return std::any_of(steps.begin(), steps.end(),
                         [&](const Step& s) { return observably_matches(s, cx.action); });
    };
    if (cx.requirement == Counterexample::Requirement::Offers) {
      CHECK(matches(weak(a, cx.abstract_state, false)));
      CHECK_FALSE(matches(weak(r, cx.refined_state, false)));
    } else {
      bool direct = false;
      for (std::size_t e : r.out[cx.refined_state]) direct = direct || r.edges[e].step == cx.action;
      CHECK(direct);
      CHECK_FALSE(matches(weak(a, cx.abstract_state, true)));
    }
  }
}

TEST_CASE("dev-refactored-fixed complies with dev-fixed") {
  auto ws = testing::load({"dev-fixed.obj", "dev-refactored-fixed.obj"});
  auto refined = testing::resolved(ws, "dev-refactored-fixed");
  auto abstract = testing::resolved(ws, "dev-fixed");
  CHECK(refines(ws, "dev-refactored-fixed", "dev-fixed"));
  CHECK(check_compliance(*refined, *abstract).empty());

  // Independent evidence: both produce the same observable traces.
  auto a = oracle::traces(*refined, 12);
  auto b = oracle::traces(*abstract, 12);
  CHECK(a.size() > 12);
  CHECK(a == b);
}

TEST_CASE("the trace oracle tells dev and dev-refactored apart") {
  auto ws = testing::load({"dev.obj", "dev-refactored.obj"});
  CHECK(oracle::traces(*testing::resolved(ws, "dev"), 8) !=
        oracle::traces(*testing::resolved(ws, "dev-refactored"), 8));
}

TEST_CASE("refinement is transitive on the dev chain") {
  auto ws = testing::load({"dev-fixed.obj", "dev-refactored-fixed.obj", "dev-extended.obj"});
  CHECK(refines(ws, "dev-extended", "dev-refactored-fixed"));
  CHECK(refines(ws, "dev-refactored-fixed", "dev-fixed"));
  CHECK(refines(ws, "dev-extended", "dev-fixed"));
  // Offering more is fine in one direction only.
  CHECK_FALSE(refines(ws, "dev-fixed", "dev-extended"));
}

TEST_CASE("refinement preserves compatibility on declared fixture pairs") {
  auto ws = testing::load_all();
  std::size_t pairs = 0;
  for (const auto& name : ws.system_names()) {
    auto refined = testing::resolved(ws, name);
    if (!refined->parent) continue;
    const auto& abstract = *refined->parent;
    if (!weak_alt_sim(observable_lts(*refined), observable_lts(abstract)).holds) continue;
    if (!check_compatibility(abstract).empty()) continue;
    INFO(name << " refines " << abstract.name);
    CHECK(check_compatibility(*refined).empty());
    ++pairs;
  }
  CHECK(pairs == 2);
}

TEST_CASE("internal faults are invisible to refinement") {
  // dev drops the dev team's stop branch, which only matters internally.
  auto ws = testing::load({"dev.obj", "dev-fixed.obj"});
  CHECK(refines(ws, "dev", "dev-fixed"));
  CHECK(check_compatibility(*testing::resolved(ws, "dev-fixed")).empty());
  CHECK_FALSE(check_compatibility(*testing::resolved(ws, "dev")).empty());
}

TEST_CASE("each missing receive is reported") {
  auto ws = testing::from_text(
      "system full\nobj p\next ? { a. b. c. }\n"
      "system part: full\nobj p\next ? a.\n");
  auto ds = check_compliance(*testing::resolved(ws, "part"), *testing::resolved(ws, "full"));
  REQUIRE(ds.size() == 2);
  for (const auto& d : ds) CHECK(d.kind == DiagKind::MissingOffer);
  CHECK(testing::text_at(ws, ds[0].span) == "b");
  CHECK(testing::text_at(ws, ds[1].span) == "c");
}

TEST_CASE("sending less than the abstraction is allowed") {
  auto ws = testing::from_text(
      "system full\nobj p\next ! { a. b. }\n"
      "system less: full\nobj p\next ! a.\n");
  CHECK(check_compliance(*testing::resolved(ws, "less"), *testing::resolved(ws, "full")).empty());
  CHECK_FALSE(check_compliance(*testing::resolved(ws, "full"), *testing::resolved(ws, "less")).empty());
}

TEST_CASE("payload values must agree unless unknown") {
  auto ws = testing::from_text(
      "system one\nobj p\next ! v(1).\n"
      "system two: one\nobj p\next ! v(2).\n"
      "system any: one\nobj p\next ? x(n)\next ! v(n).\n");
  CHECK_FALSE(check_compliance(*testing::resolved(ws, "two"), *testing::resolved(ws, "one")).empty());
  auto r = observable_lts(*testing::resolved(ws, "any"));
  CHECK(r.alphabet().size() == 2);
}

TEST_CASE("silent divergence is a warning") {
  auto ws = testing::from_text(kDivergent);
  auto ds = check_compliance(*testing::resolved(ws, "spin2"), *testing::resolved(ws, "spin"));
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].kind == DiagKind::DivergenceWarning);
  CHECK(ds[0].severity == Severity::Warning);
}
