#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "beliefplan/error.hpp"

namespace beliefplan::detail {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Splits text into identifiers, unsigned numbers and one- or two-character
/// symbols. Whitespace is insignificant.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    Token tok{Tok::Symbol, {}, 0.0, line, col};
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      tok.kind = Tok::Ident;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) {
        ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      tok.kind = Tok::Number;
      tok.text = std::string(src.substr(i, j - i));
      const auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
      if (res.ec != std::errc{} || res.ptr != tok.text.data() + tok.text.size()) {
        throw ParseError("malformed number '" + tok.text + "'", line, col);
      }
      advance(j - i);
    } else {
      static constexpr std::string_view two[] = {"<=", ">=", "=="};
      bool matched = false;
      for (auto sym : two) {
        if (src.substr(i, 2) == sym) {
          tok.text = std::string(sym);
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        static constexpr std::string_view one = "()[]{},&|+-*^";
        if (one.find(ch) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
        }
        tok.text = std::string(1, ch);
        advance(1);
      }
    }
    out.push_back(std::move(tok));
  }
  out.push_back(Token{Tok::End, {}, 0.0, line, col});
  return out;
}

/// Cursor over a token list with expectation helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_symbol(std::string_view s) const {
    return peek().kind == Tok::Symbol && peek().text == s;
  }
  bool at_ident(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }
  bool accept_symbol(std::string_view s) {
    if (!at_symbol(s)) return false;
    next();
    return true;
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail("expected '" + std::string(s) + "'");
  }
  void expect_ident(std::string_view s) {
    if (!at_ident(s)) fail("expected '" + std::string(s) + "'");
    next();
  }
  double expect_number() {
    if (peek().kind != Tok::Number) fail("expected a number");
    return next().number;
  }
  int expect_int() {
    const Token& t = peek();
    if (t.kind != Tok::Number || t.text.find_first_not_of("0123456789") != std::string::npos) {
      fail("expected a non-negative integer");
    }
    int v = 0;
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc{}) fail("integer out of range");
    next();
    return v;
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(what + ", found " + found, t.line, t.column);
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& what) const {
    throw ParseError(what, t.line, t.column);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

/// Parses "x<digits>" into its index, or returns -1.
inline int variable_index(const std::string& ident) {
  if (ident.size() < 2 || ident[0] != 'x') return -1;
  int v = 0;
  const auto res = std::from_chars(ident.data() + 1, ident.data() + ident.size(), v);
  if (res.ec != std::errc{} || res.ptr != ident.data() + ident.size()) return -1;
  return v;
}

}  // namespace beliefplan::detail
