#pragma once

#include "objcheck/source.hpp"
#include "objcheck/value.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace objcheck {

enum class DiagKind {
  // syntax and resolution
  UnexpectedToken,
  UnterminatedString,
  DuplicateLabel,
  UnterminatedProcess,
  UndeclaredBehaviour,
  BehaviourArity,
  UnboundVariable,
  DuplicateBehaviour,
  DuplicateBinder,
  DuplicateObject,
  DuplicateSystem,
  SelfMessage,
  InvalidParent,
  UnknownSystem,
  ImportCycle,
  // compatibility
  UndeliverableSend,
  StuckReceive,
  Deadlock,
  QueueOverflow,
  ArityMismatch,
  StateLimit,
  InvokeDepth,
  // compliance
  MissingOffer,
  ExcessDemand,
  DivergenceWarning,
};

enum class DiagClass { Syntax, Compatibility, Compliance };
enum class Polarity { Send, Receive, None };
enum class Severity { Error, Warning, Info };

DiagClass class_of(DiagKind kind);
Polarity polarity_of(DiagKind kind);

std::string_view to_string(DiagKind kind);
std::string_view to_string(DiagClass cls);
std::string_view to_string(Polarity polarity);
std::string_view to_string(Severity severity);

std::optional<DiagKind> diag_kind_from_string(std::string_view name);

/// One transition of a witness or counterexample path.
struct Step {
  enum class Kind { InternalSend, InternalReceive, ExternalSend, ExternalReceive };

  std::string actor;
  std::size_t branch = 0;  // branch index within the actor's current choice
  Kind kind = Kind::InternalSend;
  std::string peer;
  std::string label;
  std::vector<Value> payload;
  Span span;  // label token of the branch taken

  bool is_send() const { return kind == Kind::InternalSend || kind == Kind::ExternalSend; }
  bool is_internal() const { return kind == Kind::InternalSend || kind == Kind::InternalReceive; }

  friend bool operator==(const Step&, const Step&) = default;
};

std::string describe(const Step& step);

struct Note {
  Span span;
  std::string message;
};

struct Diagnostic {
  DiagKind kind = DiagKind::UnexpectedToken;
  Severity severity = Severity::Error;
  Span span;
  std::string message;
  std::string system;
  std::vector<Step> witness;
  std::vector<Note> notes;

  DiagClass diag_class() const { return class_of(kind); }
  Polarity polarity() const { return polarity_of(kind); }
  bool counts() const { return severity != Severity::Info; }
};

Diagnostic make_diagnostic(DiagKind kind, Span span, std::string message);

/// Sorts by file path, span, kind, then system, so output is independent of
/// the order checks ran in.
void sort_diagnostics(std::vector<Diagnostic>& diags, const SourceSet& sources);

std::size_t count_errors(const std::vector<Diagnostic>& diags);

}  // namespace objcheck
