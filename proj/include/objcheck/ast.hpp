#pragma once

#include "objcheck/source.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace objcheck {

struct Expr {
  enum class Kind { Var, Int, Str };
  Kind kind = Kind::Var;
  std::string text;  // variable name or string contents
  std::int64_t number = 0;
  Span span;
};

struct Binder {
  std::string name;
  Span span;
};

struct Proc;
using ProcPtr = std::unique_ptr<Proc>;

struct SendBranch {
  std::string label;
  Span label_span;
  std::vector<Expr> args;
  ProcPtr body;
};

struct RecvBranch {
  std::string label;
  Span label_span;
  std::vector<Binder> binders;
  ProcPtr body;
};

struct SendChoice {
  std::string peer;
  Span peer_span;
  std::vector<SendBranch> branches;
};

struct RecvChoice {
  std::string peer;
  Span peer_span;
  std::vector<RecvBranch> branches;
};

struct Invoke {
  std::string name;
  Span name_span;
  std::vector<Expr> args;
};

struct Stop {};

/// A process term. Single-label actions are one-branch choices whose branch
/// body is the continuation, so every process ends in a choice, an
/// invocation, or `.`.
struct Proc {
  std::variant<SendChoice, RecvChoice, Invoke, Stop> node;
  Span span;

  const SendChoice* send() const { return std::get_if<SendChoice>(&node); }
  const RecvChoice* recv() const { return std::get_if<RecvChoice>(&node); }
  const Invoke* invoke() const { return std::get_if<Invoke>(&node); }
  bool is_stop() const { return std::holds_alternative<Stop>(node); }
};

struct Behaviour {
  std::string name;
  Span name_span;
  std::vector<Binder> params;
  ProcPtr body;
};

struct ObjectDecl {
  std::string name;
  Span name_span;
  std::vector<Behaviour> behaviours;  // declaration order, names unique
  ProcPtr main;
  Span span;

  const Behaviour* find_behaviour(std::string_view name) const;
};

struct SystemDecl {
  std::string name;
  Span name_span;
  std::optional<std::string> parent;
  Span parent_span;
  std::vector<std::string> usings;
  std::vector<Span> using_spans;
  std::vector<std::shared_ptr<const ObjectDecl>> objects;
  Span span;
};

using SystemDeclPtr = std::shared_ptr<const SystemDecl>;

/// Span-insensitive structural equality.
bool same_structure(const Proc& a, const Proc& b);
bool same_structure(const ObjectDecl& a, const ObjectDecl& b);
bool same_structure(const SystemDecl& a, const SystemDecl& b);

}  // namespace objcheck
