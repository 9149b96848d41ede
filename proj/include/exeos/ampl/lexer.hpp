#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "exeos/common.hpp"

namespace exeos::ampl {

enum class TokenKind {
  Ident,
  Number,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Comma,
  Semicolon,
  Colon,
  Assign,  // :=
  Plus,
  Minus,
  Star,
  Le,  // <=
  Ge,  // >=
  Eq,  // =
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  double number = 0.0;  // valid when kind == Number
  SourceLoc loc;
};

// Tokenizes a whole document. '#' comments run to end of line. Keywords are
// plain identifiers; the parser matches them by text.
Result<std::vector<Token>, CompileError> lex(std::string_view text);

}  // namespace exeos::ampl
