#include "lexer.hpp"

#include <cctype>

namespace patcheck::detail {

namespace {

bool is_symbol(char c) {
  switch (c) {
    case '!': case '#': case '$': case '%': case '&': case '*': case '+': case '.':
    case '/': case '<': case '=': case '>': case '?': case '@': case '\\': case '^':
    case '|': case '-': case '~': case ':':
      return true;
    default:
      return false;
  }
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

SourceSpan Token::span() const {
  SourceSpan s;
  s.line = s.end_line = line;
  s.col = col;
  s.end_col = col + static_cast<std::uint32_t>(length ? length - 1 : 0);
  return s;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::uint32_t line = 1;
  std::uint32_t col = 1;
  std::size_t i = 0;
  bool fresh_line = true;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        fresh_line = true;
      } else {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    // Line comment: two or more dashes not followed by another symbol.
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      std::size_t j = i;
      while (j < src.size() && src[j] == '-') ++j;
      if (j >= src.size() || !is_symbol(src[j])) {
        while (i < src.size() && src[i] != '\n') advance(1);
        continue;
      }
    }

    Token t;
    t.offset = i;
    t.line = line;
    t.col = col;
    t.line_start = fresh_line;
    fresh_line = false;

    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < src.size() && is_ident_char(src[j])) ++j;
      t.kind = std::isupper(static_cast<unsigned char>(c)) ? TokenKind::UpperIdent : TokenKind::LowerIdent;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = TokenKind::Integer;
    } else if (is_symbol(c)) {
      while (j < src.size() && is_symbol(src[j])) ++j;
      t.kind = TokenKind::Operator;
    } else if (c == '"' || c == '\'') {
      j = i + 1;
      while (j < src.size() && src[j] != c && src[j] != '\n') {
        if (src[j] == '\\' && j + 1 < src.size()) ++j;
        ++j;
      }
      if (j < src.size() && src[j] == c) ++j;
      t.kind = TokenKind::Text;
    } else {
      j = i + 1;
      switch (c) {
        case '(': t.kind = TokenKind::LParen; break;
        case ')': t.kind = TokenKind::RParen; break;
        case '[': t.kind = TokenKind::LBracket; break;
        case ']': t.kind = TokenKind::RBracket; break;
        case ',': t.kind = TokenKind::Comma; break;
        case '`': t.kind = TokenKind::Backtick; break;
        default:
          // Consume a whole UTF-8 sequence as one unknown token.
          while (j < src.size() && (static_cast<unsigned char>(src[j]) & 0xC0) == 0x80) ++j;
          t.kind = TokenKind::Unknown;
          break;
      }
    }
    t.text = std::string(src.substr(i, j - i));
    t.length = j - i;
    advance(j - i);
    out.push_back(std::move(t));
  }

  Token end;
  end.kind = TokenKind::End;
  end.offset = src.size();
  end.line = line;
  end.col = col;
  end.line_start = true;
  out.push_back(end);
  return out;
}

}  // namespace patcheck::detail
