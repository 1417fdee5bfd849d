#include "objcheck/source.hpp"

#include <tuple>

namespace objcheck {

bool span_less(const Span& a, const Span& b) {
  return std::tie(a.file, a.begin, a.end) < std::tie(b.file, b.begin, b.end);
}

Span join(const Span& first, const Span& last) {
  Span s = first;
  s.end = last.end;
  s.end_line = last.end_line;
  s.end_col = last.end_col;
  return s;
}

FileId SourceSet::add(std::string path, std::string text) {
  files_.push_back(SourceFile{std::move(path), std::move(text)});
  return static_cast<FileId>(files_.size() - 1);
}

std::string_view SourceSet::slice(const Span& span) const {
  std::string_view text = file(span.file).text;
  if (span.begin > text.size()) return {};
  return text.substr(span.begin, span.end - span.begin);
}

std::string_view SourceSet::line(FileId id, std::uint32_t line) const {
  std::string_view text = file(id).text;
  std::size_t pos = 0;
  for (std::uint32_t l = 1; l < line; ++l) {
    pos = text.find('\n', pos);
    if (pos == std::string_view::npos) return {};
    ++pos;
  }
  std::size_t end = text.find('\n', pos);
  std::string_view out = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
  if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
  return out;
}

}  // namespace objcheck
