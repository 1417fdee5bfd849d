#include "lexer.hpp"

#include <fmt/format.h>

#include <charconv>
#include <optional>

namespace objcheck::detail {

std::string_view describe(Tok tok) {
  switch (tok) {
    case Tok::LIdent: return "identifier";
    case Tok::UIdent: return "behaviour name";
    case Tok::Int: return "integer";
    case Tok::Str: return "string";
    case Tok::KwSystem: return "`system`";
    case Tok::KwUsing: return "`using`";
    case Tok::KwObj: return "`obj`";
    case Tok::KwBehaviour: return "`behaviour`";
    case Tok::Bang: return "`!`";
    case Tok::Query: return "`?`";
    case Tok::LBrace: return "`{`";
    case Tok::RBrace: return "`}`";
    case Tok::LParen: return "`(`";
    case Tok::RParen: return "`)`";
    case Tok::Comma: return "`,`";
    case Tok::Dot: return "`.`";
    case Tok::Colon: return "`:`";
    case Tok::End: return "end of file";
  }
  return "token";
}

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

class Lexer {
 public:
  Lexer(std::string_view text, FileId file) : text_(text), file_(file) {}

  LexResult run() {
    LexResult out;
    while (true) {
      skip_trivia();
      if (pos_ >= text_.size()) break;
      mark();
      char c = text_[pos_];
      if (is_alpha(c)) {
        out.tokens.push_back(identifier());
      } else if (is_digit(c)) {
        if (auto tok = integer(out.diagnostics)) out.tokens.push_back(std::move(*tok));
      } else if (c == '"') {
        if (auto tok = string_literal(out.diagnostics)) {
          out.tokens.push_back(std::move(*tok));
        } else {
          break;
        }
      } else if (auto kind = punct(c)) {
        advance();
        out.tokens.push_back(Token{*kind, std::string(1, c), 0, span()});
      } else {
        advance();
        out.diagnostics.push_back(make_diagnostic(DiagKind::UnexpectedToken, span(),
                                                  fmt::format("unexpected character `{}`", c)));
      }
    }
    mark();
    out.tokens.push_back(Token{Tok::End, {}, 0, span()});
    return out;
  }

 private:
  static std::optional<Tok> punct(char c) {
    switch (c) {
      case '!': return Tok::Bang;
      case '?': return Tok::Query;
      case '{': return Tok::LBrace;
      case '}': return Tok::RBrace;
      case '(': return Tok::LParen;
      case ')': return Tok::RParen;
      case ',': return Tok::Comma;
      case '.': return Tok::Dot;
      case ':': return Tok::Colon;
      default: return std::nullopt;
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void mark() {
    start_ = pos_;
    start_line_ = line_;
    start_col_ = col_;
  }

  Span span() const {
    return Span{file_, static_cast<std::uint32_t>(start_), static_cast<std::uint32_t>(pos_),
                start_line_, start_col_, line_, col_};
  }

  Token identifier() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      // `-` joins words (`dev-refactored`) but never ends an identifier
      if (is_alnum(c) || c == '_' ||
          (c == '-' && pos_ + 1 < text_.size() && is_alnum(text_[pos_ + 1]))) {
        advance();
      } else {
        break;
      }
    }
    std::string word(text_.substr(start_, pos_ - start_));
    Tok kind = (word[0] >= 'A' && word[0] <= 'Z') ? Tok::UIdent : Tok::LIdent;
    if (word == "system") kind = Tok::KwSystem;
    else if (word == "using") kind = Tok::KwUsing;
    else if (word == "obj") kind = Tok::KwObj;
    else if (word == "behaviour") kind = Tok::KwBehaviour;
    return Token{kind, std::move(word), 0, span()};
  }

  std::optional<Token> integer(std::vector<Diagnostic>& diags) {
    while (pos_ < text_.size() && is_digit(text_[pos_])) advance();
    std::string_view digits = text_.substr(start_, pos_ - start_);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{}) {
      diags.push_back(make_diagnostic(DiagKind::UnexpectedToken, span(),
                                      fmt::format("integer literal `{}` is out of range", digits)));
      return std::nullopt;
    }
    return Token{Tok::Int, std::string(digits), value, span()};
  }

  std::optional<Token> string_literal(std::vector<Diagnostic>& diags) {
    advance();  // opening quote
    std::string contents;
    while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') {
      char c = text_[pos_];
      if (c == '\\' && pos_ + 1 < text_.size() &&
          (text_[pos_ + 1] == '"' || text_[pos_ + 1] == '\\')) {
        advance();
        c = text_[pos_];
      }
      contents.push_back(c);
      advance();
    }
    if (pos_ >= text_.size() || text_[pos_] != '"') {
      diags.push_back(make_diagnostic(DiagKind::UnterminatedString, span(),
                                      "unterminated string literal"));
      return std::nullopt;
    }
    advance();
    return Token{Tok::Str, std::move(contents), 0, span()};
  }

  std::string_view text_;
  FileId file_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
  std::size_t start_ = 0;
  std::uint32_t start_line_ = 1;
  std::uint32_t start_col_ = 1;
};

}  // namespace

LexResult lex(std::string_view text, FileId file) { return Lexer(text, file).run(); }

}  // namespace objcheck::detail
