#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "patcheck/types.hpp"

namespace patcheck::detail {

enum class TokenKind {
  LowerIdent,  // variables, functions, type variables, keywords
  UpperIdent,  // constructors and type names
  Integer,
  Operator,    // maximal run of symbol characters
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Backtick,
  Text,        // string or character literal (RHS only)
  Unknown,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t offset = 0;  // byte offset into the source
  std::size_t length = 0;
  std::uint32_t line = 1;
  std::uint32_t col = 1;
  bool line_start = false;  // first token on its line

  bool is(TokenKind k) const { return kind == k; }
  bool is_op(std::string_view s) const { return kind == TokenKind::Operator && text == s; }
  bool is_word(std::string_view s) const { return kind == TokenKind::LowerIdent && text == s; }
  SourceSpan span() const;
};

/// Tokenize MiniFun source; `--` comments are dropped. Always ends with End.
std::vector<Token> tokenize(std::string_view source);

}  // namespace patcheck::detail
