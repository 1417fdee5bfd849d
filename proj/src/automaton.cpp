#include "objcheck/automaton.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>

namespace objcheck {

const Value* lookup(const Env& env, std::string_view name) {
  auto it = std::lower_bound(env.begin(), env.end(), name,
                             [](const auto& entry, std::string_view n) { return entry.first < n; });
  if (it == env.end() || it->first != name) return nullptr;
  return &it->second;
}

void bind_var(Env& env, const std::string& name, Value value) {
  auto it = std::lower_bound(env.begin(), env.end(), name,
                             [](const auto& entry, const std::string& n) { return entry.first < n; });
  if (it != env.end() && it->first == name) {
    it->second = std::move(value);
  } else {
    env.insert(it, {name, std::move(value)});
  }
}

Value eval_expr(const Env& env, const Expr& expr) {
  switch (expr.kind) {
    case Expr::Kind::Int: return Value::integer(expr.number);
    case Expr::Kind::Str: return Value::string(expr.text);
    case Expr::Kind::Var: {
      const Value* v = lookup(env, expr.text);
      // scope checking happens at parse time; an unbound name cannot reach here
      return v ? *v : Value::unknown();
    }
  }
  return Value::unknown();
}

std::size_t hash_value(const LocalState& s) {
  std::size_t h = std::hash<std::uint32_t>{}(s.point);
  for (const auto& [name, value] : s.env) {
    h = h * 1000003u ^ std::hash<std::string>{}(name);
    h = h * 1000003u ^ value.hash();
  }
  return h;
}

ObjectAutomaton::ObjectAutomaton(std::shared_ptr<const ObjectDecl> decl, AutomatonOptions options)
    : decl_(std::move(decl)), options_(options) {
  number(*decl_->main);
  for (const auto& b : decl_->behaviours) number(*b.body);
}

void ObjectAutomaton::number(const Proc& p) {
  ids_.emplace(&p, static_cast<std::uint32_t>(nodes_.size()));
  nodes_.push_back(&p);
  if (const auto* s = p.send()) {
    for (const auto& b : s->branches) number(*b.body);
  } else if (const auto* r = p.recv()) {
    for (const auto& b : r->branches) number(*b.body);
  }
}

LocalState ObjectAutomaton::settle(const Proc& start, Env env) const {
  const Proc* p = &start;
  std::size_t depth = 0;
  while (const auto* inv = p->invoke()) {
    if (++depth > options_.invoke_depth) {
      throw InvokeDepthError(inv->name_span,
                             fmt::format("`{}` invokes behaviours {} times without an action",
                                         decl_->name, options_.invoke_depth));
    }
    const Behaviour* b = decl_->find_behaviour(inv->name);
    Env next;
    for (std::size_t i = 0; i < b->params.size(); ++i) {
      bind_var(next, b->params[i].name, eval_expr(env, inv->args[i]));
    }
    env = std::move(next);
    p = b->body.get();
  }
  return LocalState{ids_.at(p), std::move(env)};
}

LocalState ObjectAutomaton::initial() const { return settle(*decl_->main, {}); }

std::vector<LocalStep> ObjectAutomaton::successors(const LocalState& s) const {
  std::vector<LocalStep> out;
  const Proc& p = point(s);
  if (const auto* send = p.send()) {
    for (std::size_t i = 0; i < send->branches.size(); ++i) {
      const auto& br = send->branches[i];
      Action a{decl_->name, send->peer, Direction::Send, br.label, {}, br.args.size(),
               br.label_span};
      for (const auto& e : br.args) a.payload.push_back(eval_expr(s.env, e));
      out.push_back(LocalStep{i, std::move(a), settle(*br.body, s.env)});
    }
  } else if (const auto* recv = p.recv()) {
    for (std::size_t i = 0; i < recv->branches.size(); ++i) {
      const auto& br = recv->branches[i];
      std::vector<Value> unknowns(br.binders.size(), Value::unknown());
      Action a{decl_->name, recv->peer, Direction::Receive, br.label, unknowns,
               br.binders.size(), br.label_span};
      out.push_back(LocalStep{i, std::move(a), receive(s, i, unknowns)});
    }
  }
  return out;
}

LocalState ObjectAutomaton::receive(const LocalState& s, std::size_t branch,
                                    std::span<const Value> payload) const {
  const auto& br = point(s).recv()->branches.at(branch);
  Env env = s.env;
  for (std::size_t i = 0; i < br.binders.size(); ++i) {
    bind_var(env, br.binders[i].name, i < payload.size() ? payload[i] : Value::unknown());
  }
  return settle(*br.body, std::move(env));
}

ObjectAutomaton build_automaton(std::shared_ptr<const ObjectDecl> decl, AutomatonOptions options) {
  return ObjectAutomaton(std::move(decl), options);
}

std::vector<LocalStep> local_successors(const ObjectAutomaton& automaton, const LocalState& s) {
  return automaton.successors(s);
}

}  // namespace objcheck
