#include "exeos/ampl/lexer.hpp"

#include <cctype>

namespace exeos::ampl {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

Result<std::vector<Token>, CompileError> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;

  auto loc = [&]() { return SourceLoc{line, col}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  auto push = [&](TokenKind kind, std::size_t len) {
    out.push_back({kind, std::string(text.substr(i, len)), 0.0, loc()});
    advance(len);
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (ident_start(c)) {
      std::size_t len = 1;
      while (i + len < text.size() && ident_char(text[i + len])) ++len;
      push(TokenKind::Ident, len);
      continue;
    }
    if (digit(c) || (c == '.' && i + 1 < text.size() && digit(text[i + 1]))) {
      std::size_t len = 0;
      while (i + len < text.size() && digit(text[i + len])) ++len;
      if (i + len < text.size() && text[i + len] == '.') {
        ++len;
        while (i + len < text.size() && digit(text[i + len])) ++len;
      }
      if (i + len < text.size() && (text[i + len] == 'e' || text[i + len] == 'E')) {
        std::size_t elen = len + 1;
        if (i + elen < text.size() && (text[i + elen] == '+' || text[i + elen] == '-')) ++elen;
        if (i + elen < text.size() && digit(text[i + elen])) {
          len = elen;
          while (i + len < text.size() && digit(text[i + len])) ++len;
        }
      }
      Token tok{TokenKind::Number, std::string(text.substr(i, len)), 0.0, loc()};
      auto parsed = parse_double(tok.text);
      if (!parsed) {
        return CompileError{CompileErrorKind::Lex, tok.loc, "",
                            "malformed numeric literal '" + tok.text + "'"};
      }
      tok.number = *parsed;
      out.push_back(std::move(tok));
      advance(len);
      continue;
    }
    switch (c) {
      case '{': push(TokenKind::LBrace, 1); continue;
      case '}': push(TokenKind::RBrace, 1); continue;
      case '[': push(TokenKind::LBracket, 1); continue;
      case ']': push(TokenKind::RBracket, 1); continue;
      case '(': push(TokenKind::LParen, 1); continue;
      case ')': push(TokenKind::RParen, 1); continue;
      case ',': push(TokenKind::Comma, 1); continue;
      case ';': push(TokenKind::Semicolon, 1); continue;
      case '+': push(TokenKind::Plus, 1); continue;
      case '-': push(TokenKind::Minus, 1); continue;
      case '*': push(TokenKind::Star, 1); continue;
      case '=': push(TokenKind::Eq, 1); continue;
      case ':':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          push(TokenKind::Assign, 2);
        } else {
          push(TokenKind::Colon, 1);
        }
        continue;
      case '<':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          push(TokenKind::Le, 2);
          continue;
        }
        return CompileError{CompileErrorKind::Lex, loc(), "",
                            "expected '<=' (strict '<' is not in the subset)"};
      case '>':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          push(TokenKind::Ge, 2);
          continue;
        }
        return CompileError{CompileErrorKind::Lex, loc(), "",
                            "expected '>=' (strict '>' is not in the subset)"};
      default:
        return CompileError{CompileErrorKind::Lex, loc(), "",
                            std::string("unexpected character '") + c + "'"};
    }
  }
  out.push_back({TokenKind::End, "", 0.0, loc()});
  return out;
}

}  // namespace exeos::ampl
