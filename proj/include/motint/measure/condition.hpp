#pragma once

#include "motint/greenberg/jet.hpp"
#include "motint/polyalg/parse.hpp"

#include <memory>

namespace motint {

/// Boolean combination of order constraints on polynomials, decided on a
/// level-n jet. Vanish/NonVanish refer to vanishing modulo t^{n+1}.
struct Condition {
  enum class Kind { True, False, Vanish, NonVanish, OrdEq, OrdGe, And, Or, Not };
  Kind kind = Kind::True;
  std::optional<IntPoly> poly;
  long value = 0;
  std::vector<Condition> children;

  static Condition always() { return {}; }
  static Condition never() { return {Kind::False, std::nullopt, 0, {}}; }
  static Condition vanish(IntPoly f) { return {Kind::Vanish, std::move(f), 0, {}}; }
  static Condition non_vanish(IntPoly f) { return {Kind::NonVanish, std::move(f), 0, {}}; }
  static Condition ord_eq(IntPoly f, long k) { return {Kind::OrdEq, std::move(f), k, {}}; }
  static Condition ord_ge(IntPoly f, long k) { return {Kind::OrdGe, std::move(f), k, {}}; }
  static Condition negate(Condition c) { return {Kind::Not, std::nullopt, 0, {std::move(c)}}; }
  static Condition all_of(std::vector<Condition> cs) {
    if (cs.empty()) return always();
    if (cs.size() == 1) return std::move(cs[0]);
    return {Kind::And, std::nullopt, 0, std::move(cs)};
  }
  static Condition any_of(std::vector<Condition> cs) {
    if (cs.empty()) return never();
    if (cs.size() == 1) return std::move(cs[0]);
    return {Kind::Or, std::nullopt, 0, std::move(cs)};
  }

  friend Condition operator&&(Condition a, Condition b) { return all_of({std::move(a), std::move(b)}); }

  /// Every polynomial mentioned, in first-occurrence order.
  void collect(std::vector<IntPoly>& out) const {
    if (poly && std::find(out.begin(), out.end(), *poly) == out.end()) out.push_back(*poly);
    for (const auto& c : children) c.collect(out);
  }

  /// Throws unless every constraint is decided by level-n truncations.
  void check_level(unsigned n) const {
    if (kind == Kind::OrdEq && (value < 0 || value > static_cast<long>(n)))
      throw MathError("condition ord(" + poly->to_string() + ") = " + std::to_string(value) +
                      " is not decided at level " + std::to_string(n));
    if (kind == Kind::OrdGe && (value < 0 || value > static_cast<long>(n) + 1))
      throw MathError("condition ord(" + poly->to_string() + ") >= " + std::to_string(value) +
                      " is not decided at level " + std::to_string(n));
    for (const auto& c : children) c.check_level(n);
  }

  /// Largest level a constraint mentions (ord = k needs level k).
  long required_level() const {
    long r = 0;
    if (kind == Kind::OrdEq) r = value;
    if (kind == Kind::OrdGe) r = value - 1;
    for (const auto& c : children) r = std::max(r, c.required_level());
    return r;
  }

  /// Decides the condition given the order of each collected polynomial.
  template <class OrderOf>
  bool holds(OrderOf&& order_of) const {
    switch (kind) {
      case Kind::True:
        return true;
      case Kind::False:
        return false;
      case Kind::Vanish:
        return order_of(*poly).at_least;
      case Kind::NonVanish:
        return !order_of(*poly).at_least;
      case Kind::OrdEq: {
        auto o = order_of(*poly);
        return !o.at_least && o.value == value;
      }
      case Kind::OrdGe:
        return order_of(*poly).value >= value;
      case Kind::And:
        for (const auto& c : children)
          if (!c.holds(order_of)) return false;
        return true;
      case Kind::Or:
        for (const auto& c : children)
          if (c.holds(order_of)) return true;
        return false;
      case Kind::Not:
        return !children[0].holds(order_of);
    }
    return false;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::True:
        return "true";
      case Kind::False:
        return "false";
      case Kind::Vanish:
        return poly->to_string() + " = 0";
      case Kind::NonVanish:
        return poly->to_string() + " != 0";
      case Kind::OrdEq:
        return "ord(" + poly->to_string() + ") = " + std::to_string(value);
      case Kind::OrdGe:
        return "ord(" + poly->to_string() + ") >= " + std::to_string(value);
      case Kind::Not:
        return "!(" + children[0].to_string() + ")";
      case Kind::And:
      case Kind::Or: {
        std::string s;
        for (std::size_t i = 0; i < children.size(); ++i) {
          if (i) s += kind == Kind::And ? " & " : " | ";
          bool wrap = children[i].kind == Kind::And || children[i].kind == Kind::Or;
          s += wrap ? "(" + children[i].to_string() + ")" : children[i].to_string();
        }
        return s;
      }
    }
    return {};
  }
};

/// Evaluates a condition on a jet, computing each polynomial's order once.
class ConditionEvaluator {
 public:
  ConditionEvaluator(Condition c, const FiniteField& field) : cond_(std::move(c)) {
    cond_.collect(polys_);
    for (const auto& f : polys_) compiled_.emplace_back(f, field);
  }

  const Condition& condition() const { return cond_; }

  bool operator()(const JetPoint& j) const {
    std::vector<std::optional<Order>> cache(polys_.size());
    return cond_.holds([&](const IntPoly& f) {
      auto i = static_cast<std::size_t>(std::find(polys_.begin(), polys_.end(), f) - polys_.begin());
      if (!cache[i]) cache[i] = order_of_digits(evaluate_on_jet(compiled_[i], j));
      return *cache[i];
    });
  }

 private:
  Condition cond_;
  std::vector<IntPoly> polys_;
  std::vector<JetPoly> compiled_;
};

namespace detail {

class ConditionParser {
 public:
  ConditionParser(Lexer& lex, const std::vector<std::string>& vars) : lex_(lex), vars_(vars) {}

  Condition disjunction() {
    std::vector<Condition> parts{conjunction()};
    while (lex_.accept("|") || lex_.accept("||")) parts.push_back(conjunction());
    return Condition::any_of(std::move(parts));
  }

 private:
  Condition conjunction() {
    std::vector<Condition> parts{negation()};
    while (lex_.accept("&") || lex_.accept("&&")) parts.push_back(negation());
    return Condition::all_of(std::move(parts));
  }

  Condition negation() {
    if (lex_.accept("!")) return Condition::negate(negation());
    return atom();
  }

  Condition atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Identifier && !is_var(t.text)) {
      if (t.text == "true") {
        lex_.take();
        return Condition::always();
      }
      if (t.text == "false") {
        lex_.take();
        return Condition::never();
      }
      if (t.text == "ord") {
        lex_.take();
        lex_.expect("(");
        IntPoly f = expression();
        lex_.expect(")");
        if (lex_.accept("=") || lex_.accept("==")) return Condition::ord_eq(std::move(f), integer());
        if (lex_.accept(">=")) return Condition::ord_ge(std::move(f), integer());
        if (lex_.accept(">")) return Condition::ord_ge(std::move(f), integer() + 1);
        lex_.fail("expected '=', '>=' or '>' after ord(...)");
      }
    }
    if (t.kind == Token::Kind::Symbol && t.text == "(") {
      Lexer saved = lex_;
      try {
        lex_.take();
        Condition inner = disjunction();
        lex_.expect(")");
        const Token& next = lex_.peek();
        bool arithmetic = next.kind == Token::Kind::Symbol &&
                          (next.text == "=" || next.text == "==" || next.text == "!=" || next.text == "+" ||
                           next.text == "-" || next.text == "*" || next.text == "^");
        if (!arithmetic) return inner;
      } catch (const ParseError&) {
      }
      lex_ = saved;
    }
    IntPoly f = expression();
    bool equal = lex_.accept("=") || lex_.accept("==");
    if (!equal && !lex_.accept("!=")) lex_.fail("expected '= 0' or '!= 0'");
    if (lex_.peek().kind != Token::Kind::Integer || lex_.peek().text != "0") lex_.fail("expected 0");
    lex_.take();
    return equal ? Condition::vanish(std::move(f)) : Condition::non_vanish(std::move(f));
  }

  IntPoly expression() {
    PolyParser<IntegerRing> p(lex_, vars_, ring_);
    return p.expression();
  }

  long integer() {
    if (lex_.peek().kind != Token::Kind::Integer) lex_.fail("expected a non-negative integer");
    return std::stol(lex_.take().text);
  }

  bool is_var(const std::string& s) const { return std::find(vars_.begin(), vars_.end(), s) != vars_.end(); }

  Lexer& lex_;
  const std::vector<std::string>& vars_;
  IntegerRing ring_;
};

}  // namespace detail

/// Grammar:
///   cond  := conj ('|' conj)*        conj := neg ('&' neg)*
///   neg   := '!' neg | atom
///   atom  := 'true' | 'false' | 'ord(' poly ')' ('=' | '>=' | '>') int
///          | poly '=' 0 | poly '!=' 0 | '(' cond ')'
inline Condition parse_condition(std::string_view text, const std::vector<std::string>& vars) {
  Lexer lex(text);
  detail::ConditionParser parser(lex, vars);
  Condition c = parser.disjunction();
  if (lex.peek().kind != Token::Kind::End) lex.fail("unexpected trailing input");
  return c;
}

}  // namespace motint
