#include "objcheck/diagnostic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <tuple>

namespace objcheck {

namespace {

constexpr std::array kKindNames = {
    "UnexpectedToken",     "UnterminatedString", "DuplicateLabel",   "UnterminatedProcess",
    "UndeclaredBehaviour", "BehaviourArity",     "UnboundVariable",  "DuplicateBehaviour",
    "DuplicateBinder",     "DuplicateObject",    "DuplicateSystem",  "SelfMessage",
    "InvalidParent",       "UnknownSystem",      "ImportCycle",      "UndeliverableSend",
    "StuckReceive",        "Deadlock",           "QueueOverflow",    "ArityMismatch",
    "StateLimit",          "InvokeDepth",        "MissingOffer",     "ExcessDemand",
    "DivergenceWarning",
};
static_assert(kKindNames.size() == static_cast<std::size_t>(DiagKind::DivergenceWarning) + 1);

}  // namespace

DiagClass class_of(DiagKind kind) {
  switch (kind) {
    case DiagKind::UndeliverableSend:
    case DiagKind::StuckReceive:
    case DiagKind::Deadlock:
    case DiagKind::QueueOverflow:
    case DiagKind::ArityMismatch:
    case DiagKind::StateLimit:
    case DiagKind::InvokeDepth:
      return DiagClass::Compatibility;
    case DiagKind::MissingOffer:
    case DiagKind::ExcessDemand:
    case DiagKind::DivergenceWarning:
      return DiagClass::Compliance;
    default:
      return DiagClass::Syntax;
  }
}

Polarity polarity_of(DiagKind kind) {
  switch (kind) {
    case DiagKind::UndeliverableSend:
    case DiagKind::ExcessDemand:
    case DiagKind::QueueOverflow:
    case DiagKind::ArityMismatch:
      return Polarity::Send;
    case DiagKind::StuckReceive:
    case DiagKind::MissingOffer:
    case DiagKind::Deadlock:
      return Polarity::Receive;
    default:
      return Polarity::None;
  }
}

std::string_view to_string(DiagKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::string_view to_string(DiagClass cls) {
  switch (cls) {
    case DiagClass::Syntax: return "syntax";
    case DiagClass::Compatibility: return "compatibility";
    case DiagClass::Compliance: return "compliance";
  }
  return "";
}

std::string_view to_string(Polarity polarity) {
  switch (polarity) {
    case Polarity::Send: return "send";
    case Polarity::Receive: return "receive";
    case Polarity::None: return "none";
  }
  return "";
}

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "";
}

std::optional<DiagKind> diag_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (name == kKindNames[i]) return static_cast<DiagKind>(i);
  }
  return std::nullopt;
}

std::string describe(const Step& step) {
  std::string payload;
  if (!step.payload.empty()) {
    payload = "(";
    for (std::size_t i = 0; i < step.payload.size(); ++i) {
      if (i) payload += ", ";
      payload += step.payload[i].to_string();
    }
    payload += ")";
  }
  return fmt::format("{} {} {}{} {} {}{}", step.actor, step.is_send() ? "sends" : "receives",
                     step.label, payload, step.is_send() ? "to" : "from", step.peer,
                     step.is_internal() ? "" : " (external)");
}

Diagnostic make_diagnostic(DiagKind kind, Span span, std::string message) {
  Diagnostic d;
  d.kind = kind;
  d.span = span;
  d.message = std::move(message);
  return d;
}

void sort_diagnostics(std::vector<Diagnostic>& diags, const SourceSet& sources) {
  auto key = [&](const Diagnostic& d) {
    const std::string& path =
        d.span.file < sources.size() ? sources.file(d.span.file).path : std::string();
    return std::make_tuple(std::cref(path), d.span.begin, d.span.end, d.kind, std::cref(d.system),
                           d.severity, std::cref(d.message));
  };
  std::stable_sort(diags.begin(), diags.end(),
                   [&](const Diagnostic& a, const Diagnostic& b) { return key(a) < key(b); });
}

std::size_t count_errors(const std::vector<Diagnostic>& diags) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.counts(); }));
}

}  // namespace objcheck
