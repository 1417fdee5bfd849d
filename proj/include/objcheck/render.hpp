#pragma once

#include "objcheck/diagnostic.hpp"
#include "objcheck/source.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace objcheck {

struct RenderOptions {
  bool color = false;
};

/// Source excerpts with underlines (`~` for compatibility, `^` for
/// everything else), a polarity tag and a numbered witness. An empty list
/// renders as a one-line success summary.
std::string render_human(const std::vector<Diagnostic>& diags, const SourceSet& sources,
                         std::size_t systems_verified, const RenderOptions& options = {});

/// One JSON document holding every diagnostic in the given order.
std::string render_json(const std::vector<Diagnostic>& diags, const SourceSet& sources);

struct JsonReport {
  SourceSet files;  // paths only; texts are empty
  std::vector<Diagnostic> diagnostics;
};

/// Reads back a document produced by render_json. Byte offsets are not part
/// of the format and come back as zero.
std::optional<JsonReport> parse_json(std::string_view text);

}  // namespace objcheck
