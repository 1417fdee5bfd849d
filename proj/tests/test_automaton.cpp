#include "objcheck/automaton.hpp"

#include "support.hpp"

#include <deque>
#include <set>

using namespace objcheck;

namespace {

ObjectAutomaton automaton_of(const ResolvedSystem& sys, const std::string& name) {
  return build_automaton(sys.objects.at(name));
}

Expr var(std::string name) {
  Expr e;
  e.kind = Expr::Kind::Var;
  e.text = std::move(name);
  return e;
}

// All local states reachable with receives binding Unknown.
std::set<std::pair<std::uint32_t, std::string>> reachable(const ObjectAutomaton& a) {
  std::set<std::pair<std::uint32_t, std::string>> seen;
  std::deque<LocalState> work{a.initial()};
  auto key = [](const LocalState& s) {
    std::string env;
    for (const auto& [k, v] : s.env) env += k + "=" + v.to_string() + ";";
    return std::make_pair(s.point, env);
  };
  seen.insert(key(work.front()));
  while (!work.empty()) {
    auto s = work.front();
    work.pop_front();
    for (const auto& st : local_successors(a, s)) {
      if (seen.insert(key(st.next)).second) work.push_back(st.next);
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("team lead starts by waiting for a release candidate") {
  auto ws = testing::load({"dev.obj"});
  auto lead = automaton_of(*testing::resolved(ws, "dev"), "teamLead");
  auto succ = local_successors(lead, lead.initial());
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].action.direction == Direction::Receive);
  CHECK(succ[0].action.label == "releaseCandidate");
  CHECK(succ[0].action.peer == "devTeam");
  CHECK(succ[0].action.subject == "teamLead");
}

TEST_CASE("team lead offers iterate and accept to business") {
  auto ws = testing::load({"dev.obj"});
  auto lead = automaton_of(*testing::resolved(ws, "dev"), "teamLead");
  auto s = local_successors(lead, lead.initial())[0].next;
  s = local_successors(lead, s)[0].next;  // business ! evaluate
  auto succ = local_successors(lead, s);
  REQUIRE(succ.size() == 2);
  CHECK(succ[0].action.label == "iterate");
  CHECK(succ[1].action.label == "accept");
  for (const auto& st : succ) {
    CHECK(st.action.direction == Direction::Receive);
    CHECK(st.action.arity == 1);
    REQUIRE(lookup(st.next.env, "tag"));
    CHECK(lookup(st.next.env, "tag")->is_unknown());
  }
}

TEST_CASE("stop has no successors") {
  auto ws = testing::from_text("system s obj p .");
  auto a = build_automaton(ws.systems[0]->objects[0]);
  CHECK(a.terminated(a.initial()));
  CHECK(local_successors(a, a.initial()).empty());
}

TEST_CASE("repository starts in Connected with n = 0") {
  auto ws = testing::load({"repo.obj"});
  auto repo = automaton_of(*testing::resolved(ws, "repo"), "repository");
  auto init = repo.initial();
  REQUIRE(init.env.size() == 1);
  CHECK(init.env[0].first == "n");
  CHECK(init.env[0].second == Value::integer(0));
  auto succ = local_successors(repo, init);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].action.label == "commit");
}

TEST_CASE("Connected(m) continues under n bound to Unknown") {
  auto ws = testing::load({"repo.obj"});
  auto repo = automaton_of(*testing::resolved(ws, "repo"), "repository");
  auto s = repo.initial();
  s = local_successors(repo, s)[0].next;  // commit
  auto rev = local_successors(repo, s);
  REQUIRE(rev.size() == 1);
  CHECK(rev[0].action.payload == std::vector<Value>{Value::integer(0)});
  s = rev[0].next;
  s = local_successors(repo, s)[0].next;  // tagRC(tag)
  auto plus = local_successors(repo, s);
  REQUIRE(plus.size() == 1);
  CHECK(plus[0].action.label == "plus");
  CHECK(plus[0].action.payload == std::vector<Value>{Value::integer(0), Value::integer(1)});
  s = local_successors(repo, plus[0].next)[0].next;  // val(m), then Connected(m)
  REQUIRE(s.env.size() == 1);
  CHECK(s.env[0].first == "n");
  CHECK(s.env[0].second.is_unknown());
  auto again = local_successors(repo, s);
  REQUIRE(again.size() == 1);
  CHECK(again[0].action.label == "commit");
  CHECK(s.point == repo.initial().point);
}

TEST_CASE("mock business sends the literal versions") {
  auto ws = testing::load({"repo.obj", "dev-fixed.obj", "repo-test.obj"});
  auto biz = automaton_of(*testing::resolved(ws, "repo-test"), "business");
  auto s = local_successors(biz, biz.initial())[0].next;
  auto succ = local_successors(biz, s);
  REQUIRE(succ.size() == 2);
  CHECK(succ[0].action.label == "accept");
  CHECK(succ[0].action.payload == std::vector<Value>{Value::string("1.0")});
  CHECK(succ[1].action.label == "iterate");
  CHECK(succ[1].action.payload == std::vector<Value>{Value::string("1.0RC")});
}

TEST_CASE("receive binds the delivered payload") {
  auto ws = testing::from_text("system s obj p q ? m(x) r ! n(x).");
  auto a = build_automaton(ws.systems[0]->objects[0]);
  std::vector<Value> payload{Value::string("hi")};
  auto s = a.receive(a.initial(), 0, payload);
  auto succ = local_successors(a, s);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].action.payload == payload);
}

TEST_CASE("expression evaluation") {
  Env env;
  bind_var(env, "n", Value::integer(0));
  bind_var(env, "m", Value::unknown());
  CHECK(eval_expr(env, var("n")) == Value::integer(0));
  CHECK(eval_expr(env, var("m")).is_unknown());
  Expr lit;
  lit.kind = Expr::Kind::Str;
  lit.text = "1.0";
  CHECK(eval_expr({}, lit) == Value::string("1.0"));
}

TEST_CASE("action-less recursion hits the invoke limit") {
  auto ws = testing::from_text("system s obj p behaviour B B B");
  REQUIRE(ws.diagnostics.empty());
  auto a = build_automaton(ws.systems[0]->objects[0], AutomatonOptions{50});
  CHECK_THROWS_AS(a.initial(), InvokeDepthError);
}

TEST_CASE("labels within a choice are distinct and receives extend the env by their binders") {
  auto ws = testing::load_all();
  for (const auto& name : ws.system_names()) {
    auto sys = testing::resolved(ws, name);
    for (const auto& [obj_name, decl] : sys->objects) {
      auto a = build_automaton(decl);
      std::deque<LocalState> work{a.initial()};
      std::size_t visited = 0;
      while (!work.empty() && visited < 500) {
        auto s = work.front();
        work.pop_front();
        ++visited;
        auto succ = local_successors(a, s);
        std::set<std::tuple<int, std::string, std::string>> seen;
        for (const auto& st : succ) {
          CHECK(seen.emplace(static_cast<int>(st.action.direction), st.action.peer, st.action.label).second);
          CHECK(st.action.subject != st.action.peer);
          const auto* recv = a.point(s).recv();
          if (recv && !recv->branches[st.branch].body->invoke()) {
            // Exactly the old env plus the branch binders.
            const auto& br = recv->branches[st.branch];
            Env expected = s.env;
            for (const auto& b : br.binders) bind_var(expected, b.name, Value::unknown());
            CHECK(st.next.env == expected);
          }
        }
        for (const auto& st : succ) work.push_back(st.next);
      }
    }
  }
}

TEST_CASE("fixture objects have finitely many local states") {
  auto ws = testing::load_all();
  for (const auto& name : ws.system_names()) {
    auto sys = testing::resolved(ws, name);
    for (const auto& [obj_name, decl] : sys->objects) {
      auto states = reachable(build_automaton(decl));
      INFO(name << "/" << obj_name);
      CHECK(states.size() < 100);
    }
  }
}

TEST_CASE("construction is deterministic") {
  auto ws = testing::load({"repo.obj"});
  auto sys = testing::resolved(ws, "repo");
  auto a = automaton_of(*sys, "repository");
  auto b = automaton_of(*sys, "repository");
  CHECK(a.initial() == b.initial());
  CHECK(reachable(a) == reachable(b));
}
