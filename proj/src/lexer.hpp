#pragma once

#include "objcheck/diagnostic.hpp"
#include "objcheck/source.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace objcheck::detail {

enum class Tok {
  LIdent,
  UIdent,
  Int,
  Str,
  KwSystem,
  KwUsing,
  KwObj,
  KwBehaviour,
  Bang,
  Query,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Dot,
  Colon,
  End,
};

std::string_view describe(Tok tok);

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name, or unescaped string contents
  std::int64_t number = 0;
  Span span;
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by Tok::End
  std::vector<Diagnostic> diagnostics;
};

LexResult lex(std::string_view text, FileId file);

}  // namespace objcheck::detail
