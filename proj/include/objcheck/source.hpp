#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace objcheck {

using FileId = std::uint32_t;

/// A half-open region of a source file. Lines and columns are 1-based;
/// the end position points one past the last character.
struct Span {
  FileId file = 0;
  std::uint32_t begin = 0;  // byte offsets, end exclusive
  std::uint32_t end = 0;
  std::uint32_t start_line = 1;
  std::uint32_t start_col = 1;
  std::uint32_t end_line = 1;
  std::uint32_t end_col = 1;

  friend bool operator==(const Span&, const Span&) = default;
};

/// Orders spans by file, then position.
bool span_less(const Span& a, const Span& b);

/// Span covering both arguments (same file assumed).
Span join(const Span& first, const Span& last);

struct SourceFile {
  std::string path;
  std::string text;
};

/// Owns the text of every file in a workspace; spans index into it by FileId.
class SourceSet {
 public:
  FileId add(std::string path, std::string text);

  const SourceFile& file(FileId id) const { return files_.at(id); }
  std::size_t size() const { return files_.size(); }

  /// Source text covered by `span`.
  std::string_view slice(const Span& span) const;
  /// Full text of the given 1-based line, without the newline.
  std::string_view line(FileId id, std::uint32_t line) const;

 private:
  std::vector<SourceFile> files_;
};

}  // namespace objcheck
