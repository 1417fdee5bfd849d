#pragma once

#include "objcheck/ast.hpp"
#include "objcheck/value.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace objcheck {

/// Variable bindings in scope at a program point, sorted by name.
using Env = std::vector<std::pair<std::string, Value>>;

const Value* lookup(const Env& env, std::string_view name);
/// Binds `name`, replacing any outer binding of the same name.
void bind_var(Env& env, const std::string& name, Value value);

Value eval_expr(const Env& env, const Expr& expr);

/// Program point plus environment. The point is always a choice or `.`:
/// invocations are followed eagerly since they are not actions.
struct LocalState {
  std::uint32_t point = 0;
  Env env;

  friend bool operator==(const LocalState&, const LocalState&) = default;
};

std::size_t hash_value(const LocalState& s);

enum class Direction { Send, Receive };

struct Action {
  std::string subject;
  std::string peer;
  Direction direction = Direction::Send;
  std::string label;
  std::vector<Value> payload;  // evaluated values for sends; Unknowns for receives
  std::size_t arity = 0;
  Span span;  // the branch label
};

struct LocalStep {
  std::size_t branch = 0;
  Action action;
  LocalState next;
};

/// Raised when a chain of invocations performs no action within the
/// configured depth, e.g. `behaviour B B`.
class InvokeDepthError : public std::runtime_error {
 public:
  InvokeDepthError(Span at, const std::string& what) : std::runtime_error(what), span(at) {}
  Span span;
};

struct AutomatonOptions {
  std::size_t invoke_depth = 1000;
};

/// An object viewed as a communicating automaton. Immutable once built.
class ObjectAutomaton {
 public:
  ObjectAutomaton(std::shared_ptr<const ObjectDecl> decl, AutomatonOptions options = {});

  const std::string& name() const { return decl_->name; }
  const ObjectDecl& decl() const { return *decl_; }

  /// Throws InvokeDepthError when the main process diverges silently.
  LocalState initial() const;

  const Proc& point(const LocalState& s) const { return *nodes_.at(s.point); }
  bool terminated(const LocalState& s) const { return point(s).is_stop(); }

  /// One step per branch of the current choice. Receive steps bind every
  /// binder to Unknown; use `receive` to bind actual payload values.
  std::vector<LocalStep> successors(const LocalState& s) const;

  /// State after taking receive branch `branch` with the given payload.
  LocalState receive(const LocalState& s, std::size_t branch, std::span<const Value> payload) const;

 private:
  void number(const Proc& p);
  LocalState settle(const Proc& p, Env env) const;

  std::shared_ptr<const ObjectDecl> decl_;
  AutomatonOptions options_;
  std::vector<const Proc*> nodes_;
  std::unordered_map<const Proc*, std::uint32_t> ids_;
};

ObjectAutomaton build_automaton(std::shared_ptr<const ObjectDecl> decl,
                                AutomatonOptions options = {});

std::vector<LocalStep> local_successors(const ObjectAutomaton& automaton, const LocalState& s);

}  // namespace objcheck
