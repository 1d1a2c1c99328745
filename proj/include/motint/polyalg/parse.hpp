#pragma once

#include "motint/polyalg/poly.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace motint {

class ParseError : public MathError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : MathError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Tokenizer shared by the polynomial, class and condition grammars.
struct Token {
  enum class Kind { Integer, Identifier, Bracketed, Symbol, End };
  Kind kind;
  std::string text;
  std::size_t position;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  bool accept(std::string_view symbol) {
    if (current_.kind == Token::Kind::Symbol && current_.text == symbol) {
      advance();
      return true;
    }
    return false;
  }

  void expect(std::string_view symbol) {
    if (!accept(symbol)) fail("expected '" + std::string(symbol) + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::string got = current_.kind == Token::Kind::End ? "end of input" : "'" + current_.text + "'";
    throw ParseError(what + ", got " + got, current_.position);
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) {
      current_ = {Token::Kind::End, "", pos_};
      return;
    }
    const std::size_t start = pos_;
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      current_ = {Token::Kind::Integer, std::string(text_.substr(start, pos_ - start)), start};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      current_ = {Token::Kind::Identifier, std::string(text_.substr(start, pos_ - start)), start};
      return;
    }
    if (c == '[') {
      auto close = text_.find(']', pos_);
      if (close == std::string_view::npos) throw ParseError("unterminated '['", start);
      current_ = {Token::Kind::Bracketed, std::string(text_.substr(start + 1, close - start - 1)), start};
      pos_ = close + 1;
      return;
    }
    static constexpr std::string_view two_char[] = {">=", "<=", "!=", "==", "&&", "||"};
    for (auto sym : two_char)
      if (text_.substr(pos_, 2) == sym) {
        pos_ += 2;
        current_ = {Token::Kind::Symbol, std::string(sym), start};
        return;
      }
    static constexpr std::string_view singles = "+-*^()=<>!&|,";
    if (singles.find(c) == std::string_view::npos) throw ParseError(std::string("unexpected character '") + c + "'", start);
    ++pos_;
    current_ = {Token::Kind::Symbol, std::string(1, c), start};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{Token::Kind::End, "", 0};
};

namespace detail {

template <CoefficientRing R>
class PolyParser {
 public:
  PolyParser(Lexer& lex, const std::vector<std::string>& vars, const R& ring)
      : lex_(lex), vars_(vars), ring_(ring) {}

  MultiPoly<R> expression() {
    MultiPoly<R> acc = term();
    while (true) {
      if (lex_.accept("+"))
        acc += term();
      else if (lex_.accept("-"))
        acc -= term();
      else
        return acc;
    }
  }

 private:
  MultiPoly<R> term() {
    MultiPoly<R> acc = unary();
    while (lex_.accept("*")) acc *= unary();
    return acc;
  }

  MultiPoly<R> unary() {
    if (lex_.accept("-")) return -unary();
    if (lex_.accept("+")) return unary();
    return power();
  }

  MultiPoly<R> power() {
    MultiPoly<R> base = primary();
    if (lex_.accept("^")) {
      if (lex_.peek().kind != Token::Kind::Integer) lex_.fail("expected a non-negative integer exponent");
      Token t = lex_.take();
      return base.pow(static_cast<unsigned>(std::stoul(t.text)));
    }
    return base;
  }

  MultiPoly<R> primary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Integer) {
      Integer value(lex_.take().text);
      return MultiPoly<R>::constant(ring_, vars_, ring_.from_integer(value));
    }
    if (t.kind == Token::Kind::Identifier) {
      Token id = lex_.take();
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == id.text) return MultiPoly<R>::variable(ring_, vars_, i);
      if (auto sym = ring_.symbol(); sym && *sym == id.text)
        return MultiPoly<R>::constant(ring_, vars_, ring_.symbol_value());
      throw ParseError("unknown variable '" + id.text + "'", id.position);
    }
    if (lex_.accept("(")) {
      MultiPoly<R> inner = expression();
      lex_.expect(")");
      return inner;
    }
    lex_.fail("expected a number, variable or '('");
  }

  Lexer& lex_;
  const std::vector<std::string>& vars_;
  const R& ring_;
};

}  // namespace detail

/// Parses an expression over integer literals, declared variables, + - * ^
/// and parentheses into a normalized polynomial.
template <CoefficientRing R>
MultiPoly<R> parse_poly(std::string_view text, const std::vector<std::string>& vars, const R& ring) {
  Lexer lex(text);
  detail::PolyParser<R> parser(lex, vars, ring);
  MultiPoly<R> result = parser.expression();
  if (lex.peek().kind != Token::Kind::End) lex.fail("unexpected trailing input");
  return result;
}

inline IntPoly parse_int_poly(std::string_view text, const std::vector<std::string>& vars) {
  return parse_poly(text, vars, IntegerRing{});
}

/// Comma separated list of names, whitespace trimmed.
inline std::vector<std::string> split_list(std::string_view text, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char c : text) {
    if (c == sep)
      flush();
    else
      cur += c;
  }
  flush();
  return out;
}

/// F_{p^m} from a modulus written as a polynomial in g, e.g. "g^2 + g + 1".
inline FiniteField parse_extension_field(std::uint64_t p, std::string_view modulus) {
  IntPoly f = parse_int_poly(modulus, {"g"});
  std::vector<std::uint64_t> coeffs(f.total_degree() + 1, 0);
  for (const auto& [m, c] : f.terms()) coeffs[m[0]] = static_cast<std::uint64_t>(mod_floor(c, Integer(p)));
  return FiniteField::extension(p, coeffs);
}

}  // namespace motint
