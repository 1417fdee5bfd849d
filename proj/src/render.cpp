#include "objcheck/render.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <map>

namespace objcheck {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kReset = "\x1b[0m";
constexpr std::string_view kBold = "\x1b[1m";

std::string_view severity_color(Severity s) {
  switch (s) {
    case Severity::Error: return "\x1b[1;31m";
    case Severity::Warning: return "\x1b[1;33m";
    case Severity::Info: return "\x1b[1;36m";
  }
  return "";
}

class Painter {
 public:
  explicit Painter(bool on) : on_(on) {}
  std::string operator()(std::string_view code, std::string_view text) const {
    if (!on_) return std::string(text);
    return fmt::format("{}{}{}", code, text, kReset);
  }

 private:
  bool on_;
};

std::string location(const SourceSet& sources, const Span& span) {
  std::string path = span.file < sources.size() ? sources.file(span.file).path : "<unknown>";
  return fmt::format("{}:{}:{}", path, span.start_line, span.start_col);
}

void excerpt(std::string& out, const SourceSet& sources, const Diagnostic& d,
             const Painter& paint) {
  if (d.span.file >= sources.size()) return;
  std::string_view line = sources.line(d.span.file, d.span.start_line);
  std::string number = std::to_string(d.span.start_line);
  std::string gutter(number.size(), ' ');

  // Copy tabs from the source so the underline stays aligned.
  std::string pad;
  for (std::size_t i = 0; i + 1 < d.span.start_col && i < line.size(); ++i) {
    pad += line[i] == '\t' ? '\t' : ' ';
  }
  std::size_t width = 1;
  if (d.span.end_line == d.span.start_line && d.span.end_col > d.span.start_col) {
    width = d.span.end_col - d.span.start_col;
  } else if (line.size() + 1 > d.span.start_col) {
    width = line.size() + 1 - d.span.start_col;
  }
  char mark = d.diag_class() == DiagClass::Compatibility ? '~' : '^';
  std::string underline(width, mark);
  std::string tag;
  if (d.polarity() == Polarity::Send) tag = " [send]";
  if (d.polarity() == Polarity::Receive) tag = " [recv]";

  out += fmt::format(" {} |\n", gutter);
  out += fmt::format(" {} | {}\n", number, line);
  out += fmt::format(" {} | {}{}{}\n", gutter, pad, paint(severity_color(d.severity), underline),
                     tag);
}

Json value_json(const Value& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_string()) return v.as_string();
  return nullptr;
}

std::string file_of(const SourceSet& sources, const Span& span) {
  return span.file < sources.size() ? sources.file(span.file).path : std::string();
}

Json step_json(const Step& s, const SourceSet& sources) {
  Json j;
  j["actor"] = s.actor;
  j["peer"] = s.peer;
  j["polarity"] = s.is_send() ? "send" : "receive";
  j["label"] = s.label;
  Json payload = Json::array();
  for (const auto& v : s.payload) payload.push_back(value_json(v));
  j["payload"] = payload;
  j["internal"] = s.is_internal();
  j["branch"] = s.branch;
  j["file"] = file_of(sources, s.span);
  j["line"] = s.span.start_line;
  j["col"] = s.span.start_col;
  return j;
}

Json position_json(std::uint32_t line, std::uint32_t col) {
  Json j;
  j["line"] = line;
  j["col"] = col;
  return j;
}

}  // namespace

std::string render_human(const std::vector<Diagnostic>& diags, const SourceSet& sources,
                         std::size_t systems_verified, const RenderOptions& options) {
  Painter paint(options.color);
  if (diags.empty()) {
    return fmt::format("ok: {} system(s) verified\n", systems_verified);
  }
  std::string out;
  std::size_t errors = 0, warnings = 0, infos = 0;
  for (const auto& d : diags) {
    switch (d.severity) {
      case Severity::Error: ++errors; break;
      case Severity::Warning: ++warnings; break;
      case Severity::Info: ++infos; break;
    }
    std::string scope = d.system.empty() ? std::string() : fmt::format(" in {}", d.system);
    out += fmt::format("{}: {}{}: {}\n", paint(kBold, location(sources, d.span)),
                       paint(severity_color(d.severity),
                             fmt::format("{}[{}]", to_string(d.severity), to_string(d.kind))),
                       scope, d.message);
    excerpt(out, sources, d, paint);
    for (const auto& n : d.notes) {
      out += fmt::format("  note: {}: {}\n", location(sources, n.span), n.message);
    }
    if (!d.witness.empty()) {
      out += "  witness:\n";
      for (std::size_t i = 0; i < d.witness.size(); ++i) {
        const Step& s = d.witness[i];
        out += fmt::format("    {}. {}  ({})\n", i + 1, describe(s), location(sources, s.span));
      }
    }
    out += "\n";
  }
  out += fmt::format("{} error(s), {} warning(s)", errors, warnings);
  if (infos) out += fmt::format(", {} note(s)", infos);
  out += "\n";
  return out;
}

std::string render_json(const std::vector<Diagnostic>& diags, const SourceSet& sources) {
  Json doc;
  doc["version"] = 1;
  doc["diagnostics"] = Json::array();
  for (const auto& d : diags) {
    Json j;
    j["kind"] = to_string(d.kind);
    j["class"] = to_string(d.diag_class());
    j["polarity"] = to_string(d.polarity());
    j["severity"] = to_string(d.severity);
    j["system"] = d.system;
    j["file"] = file_of(sources, d.span);
    Json range;
    range["start"] = position_json(d.span.start_line, d.span.start_col);
    range["end"] = position_json(d.span.end_line, d.span.end_col);
    j["range"] = range;
    j["message"] = d.message;
    j["witness"] = Json::array();
    for (const auto& s : d.witness) j["witness"].push_back(step_json(s, sources));
    j["notes"] = Json::array();
    for (const auto& n : d.notes) {
      Json note;
      note["file"] = file_of(sources, n.span);
      note["line"] = n.span.start_line;
      note["col"] = n.span.start_col;
      note["message"] = n.message;
      j["notes"].push_back(note);
    }
    doc["diagnostics"].push_back(j);
  }
  return doc.dump() + "\n";
}

std::optional<JsonReport> parse_json(std::string_view text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || doc.value("version", 0) != 1 ||
      !doc.contains("diagnostics") || !doc["diagnostics"].is_array()) {
    return std::nullopt;
  }
  JsonReport report;
  std::map<std::string, FileId> ids;
  auto file_id = [&](const std::string& path) {
    auto it = ids.find(path);
    if (it != ids.end()) return it->second;
    FileId id = report.files.add(path, "");
    ids.emplace(path, id);
    return id;
  };
  auto point = [&](const Json& j, const std::string& file) {
    Span s;
    s.file = file_id(file);
    s.start_line = s.end_line = j.at("line").get<std::uint32_t>();
    s.start_col = s.end_col = j.at("col").get<std::uint32_t>();
    return s;
  };
  static const std::map<std::string, Severity> severities = {
      {"error", Severity::Error}, {"warning", Severity::Warning}, {"info", Severity::Info}};

  try {
    for (const auto& j : doc["diagnostics"]) {
      Diagnostic d;
      auto kind = diag_kind_from_string(j.at("kind").get<std::string>());
      auto sev = severities.find(j.at("severity").get<std::string>());
      if (!kind || sev == severities.end()) return std::nullopt;
      d.kind = *kind;
      d.severity = sev->second;
      d.system = j.at("system").get<std::string>();
      d.span.file = file_id(j.at("file").get<std::string>());
      const auto& range = j.at("range");
      d.span.start_line = range.at("start").at("line").get<std::uint32_t>();
      d.span.start_col = range.at("start").at("col").get<std::uint32_t>();
      d.span.end_line = range.at("end").at("line").get<std::uint32_t>();
      d.span.end_col = range.at("end").at("col").get<std::uint32_t>();
      d.message = j.at("message").get<std::string>();
      for (const auto& s : j.at("witness")) {
        Step step;
        step.actor = s.at("actor").get<std::string>();
        step.peer = s.at("peer").get<std::string>();
        bool send = s.at("polarity").get<std::string>() == "send";
        bool internal = s.at("internal").get<bool>();
        step.kind = send ? (internal ? Step::Kind::InternalSend : Step::Kind::ExternalSend)
                         : (internal ? Step::Kind::InternalReceive : Step::Kind::ExternalReceive);
        step.label = s.at("label").get<std::string>();
        for (const auto& v : s.at("payload")) {
          if (v.is_null()) {
            step.payload.push_back(Value::unknown());
          } else if (v.is_number_integer()) {
            step.payload.push_back(Value::integer(v.get<std::int64_t>()));
          } else {
            step.payload.push_back(Value::string(v.get<std::string>()));
          }
        }
        step.branch = s.at("branch").get<std::size_t>();
        step.span = point(s, s.at("file").get<std::string>());
        d.witness.push_back(std::move(step));
      }
      for (const auto& n : j.at("notes")) {
        d.notes.push_back(Note{point(n, n.at("file").get<std::string>()),
                               n.at("message").get<std::string>()});
      }
      report.diagnostics.push_back(std::move(d));
    }
  } catch (const Json::exception&) {
    return std::nullopt;
  }
  return report;
}

}  // namespace objcheck
