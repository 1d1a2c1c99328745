#pragma once

#include "motint/polyalg/parse.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace motint {

/// Laurent polynomial in L with integer coefficients, stored highest degree
/// first.
class LaurentPoly {
 public:
  using TermMap = std::map<long, Integer, std::greater<>>;

  LaurentPoly() = default;
  static LaurentPoly monomial(const Integer& c, long degree) {
    LaurentPoly p;
    if (c != 0) p.terms_[degree] = c;
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  long top_degree() const { return terms_.begin()->first; }
  long bottom_degree() const { return terms_.rbegin()->first; }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.add(ka + kb, ca * cb);
    return r;
  }
  LaurentPoly operator-() const {
    LaurentPoly r;
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
  }
  bool operator==(const LaurentPoly&) const = default;

  /// Value at L = 1.
  Integer at_one() const {
    Integer s = 0;
    for (const auto& [k, c] : terms_) s += c;
    return s;
  }

  Rational at(const Integer& q) const {
    Rational s = 0;
    for (const auto& [k, c] : terms_) s += Rational(c) * qpow(q, k);
    return s;
  }

  bool is_single_term() const { return terms_.size() == 1; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      std::string t = monomial_string(c < 0 ? Integer(-c) : c, k);
      if (first)
        out = c < 0 ? "-" + t : t;
      else
        out += (c < 0 ? " - " : " + ") + t;
      first = false;
    }
    return out;
  }

  /// c * L^k for c > 0, with unit coefficients and exponents elided.
  static std::string monomial_string(const Integer& c, long k) {
    if (k == 0) return c.str();
    std::string power = k == 1 ? "L" : "L^" + std::to_string(k);
    return c == 1 ? power : c.str() + "*" + power;
  }

 private:
  void add(long k, const Integer& c) {
    if (c == 0) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, c);
      return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  TermMap terms_;
};

/// A named variety class [S] with declared dimension and, optionally, an exact
/// point counter over finite fields and a compactly supported Euler
/// characteristic.
struct VarietyAtom {
  std::string name;
  int dim = 0;
  std::function<Integer(const FiniteField&)> counter;
  std::optional<Integer> euler;
  /// C in the bound counter(q) <= C * q^dim.
  Integer count_constant = 1;
};

using AtomPtr = std::shared_ptr<const VarietyAtom>;
using AtomTable = std::map<std::string, AtomPtr>;

inline AtomPtr make_atom(std::string name, int dim, std::function<Integer(const FiniteField&)> counter = {},
                         std::optional<Integer> euler = std::nullopt, Integer count_constant = 1) {
  if (dim < 0) throw MathError("atom dimension must be non-negative");
  return std::make_shared<const VarietyAtom>(
      VarietyAtom{std::move(name), dim, std::move(counter), std::move(euler), std::move(count_constant)});
}

/// Product of atoms, kept sorted by name.
using AtomMonomial = std::vector<AtomPtr>;

inline int atom_dimension(const AtomMonomial& m) {
  int d = 0;
  for (const auto& a : m) d += a->dim;
  return d;
}

struct AtomMonomialOrder {
  bool operator()(const AtomMonomial& a, const AtomMonomial& b) const {
    int da = atom_dimension(a), db = atom_dimension(b);
    if (da != db) return da > db;
    if (a.size() != b.size()) return a.size() > b.size();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i]->name != b[i]->name) return a[i]->name < b[i]->name;
    return false;
  }
};

/// Element of the subring of K0(Var_k)[L^-1] spanned by atom monomials with
/// Laurent-polynomial weights in L.
class VirtualClass {
 public:
  using TermMap = std::map<AtomMonomial, LaurentPoly, AtomMonomialOrder>;

  VirtualClass() = default;

  static VirtualClass zero() { return {}; }
  static VirtualClass integer(const Integer& c) { return from_laurent(LaurentPoly::monomial(c, 0)); }
  static VirtualClass one() { return integer(1); }
  /// L^k.
  static VirtualClass lefschetz(long k = 1) { return from_laurent(LaurentPoly::monomial(1, k)); }
  static VirtualClass from_laurent(const LaurentPoly& p) {
    VirtualClass v;
    if (!p.is_zero()) v.terms_.emplace(AtomMonomial{}, p);
    return v;
  }
  static VirtualClass atom(AtomPtr a) {
    VirtualClass v;
    v.terms_.emplace(AtomMonomial{std::move(a)}, LaurentPoly::monomial(1, 0));
    return v;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_pure_laurent() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

  LaurentPoly laurent_part() const {
    auto it = terms_.find(AtomMonomial{});
    return it == terms_.end() ? LaurentPoly{} : it->second;
  }

  VirtualClass& operator+=(const VirtualClass& o) {
    for (const auto& [m, p] : o.terms_) add(m, p);
    return *this;
  }
  VirtualClass& operator-=(const VirtualClass& o) {
    for (const auto& [m, p] : o.terms_) add(m, -p);
    return *this;
  }
  friend VirtualClass operator+(VirtualClass a, const VirtualClass& b) { return a += b; }
  friend VirtualClass operator-(VirtualClass a, const VirtualClass& b) { return a -= b; }
  VirtualClass operator-() const {
    VirtualClass r;
    for (const auto& [m, p] : terms_) r.terms_.emplace(m, -p);
    return r;
  }

  friend VirtualClass operator*(const VirtualClass& a, const VirtualClass& b) {
    VirtualClass r;
    for (const auto& [ma, pa] : a.terms_)
      for (const auto& [mb, pb] : b.terms_) {
        AtomMonomial m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        std::stable_sort(m.begin(), m.end(), [](const AtomPtr& x, const AtomPtr& y) { return x->name < y->name; });
        r.add(m, pa * pb);
      }
    return r;
  }
  VirtualClass& operator*=(const VirtualClass& o) { return *this = *this * o; }

  bool operator==(const VirtualClass& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto it = o.terms_.begin();
    for (const auto& [m, p] : terms_) {
      if (AtomMonomialOrder{}(m, it->first) || AtomMonomialOrder{}(it->first, m) || !(p == it->second)) return false;
      ++it;
    }
    return true;
  }

  /// Integer power; negative exponents only for units +-L^k.
  VirtualClass pow(long e) const {
    if (e < 0) {
      if (!is_pure_laurent() || is_zero() || !laurent_part().is_single_term())
        throw MathError("negative power of a non-invertible class");
      const auto& [k, c] = *laurent_part().terms().begin();
      if (c != 1 && c != -1) throw MathError("negative power of a non-invertible class");
      Integer sign = (c == -1 && (-e) % 2 == 1) ? -1 : 1;
      return from_laurent(LaurentPoly::monomial(sign, k * e));
    }
    VirtualClass result = one(), base = *this;
    while (e > 0) {
      if (e & 1L) result *= base;
      e >>= 1;
      if (e > 0) base *= base;
    }
    return result;
  }

  /// Maximum over terms of (sum of atom dimensions + top L-degree); nullopt
  /// stands for -infinity (the zero class).
  std::optional<long> virtual_dim() const {
    std::optional<long> best;
    for (const auto& [m, p] : terms_) {
      long d = atom_dimension(m) + p.top_degree();
      if (!best || d > *best) best = d;
    }
    return best;
  }

  /// a lies in F^m iff virtual_dim(a) <= -m.
  bool in_filtration(long m) const {
    auto d = virtual_dim();
    return !d || *d <= -m;
  }

  /// ||a|| = 2^{virtual_dim(a)}, ||0|| = 0.
  Rational norm() const {
    auto d = virtual_dim();
    if (!d) return 0;
    return qpow(2, *d);
  }

  /// Point-count specialization L -> q, [S] -> |S(F_q)|.
  Rational specialize_count(const FiniteField& field) const {
    const Integer q(field.order());
    Rational total = 0;
    for (const auto& [m, p] : terms_) {
      Integer atoms = 1;
      for (const auto& a : m) {
        if (!a->counter) throw MathError("unspecializable class: atom [" + a->name + "] has no point counter");
        atoms *= a->counter(field);
      }
      total += Rational(atoms) * p.at(q);
    }
    return total;
  }

  /// Image in K0[L^-1] / (L - 1): every weight evaluated at L = 1.
  VirtualClass mod_L_minus_1() const {
    VirtualClass r;
    for (const auto& [m, p] : terms_) r.add(m, LaurentPoly::monomial(p.at_one(), 0));
    return r;
  }

  /// Compactly supported Euler characteristic: L -> 1, atoms -> euler.
  Integer euler_characteristic() const {
    Integer total = 0;
    for (const auto& [m, p] : terms_) {
      Integer atoms = 1;
      for (const auto& a : m) {
        if (!a->euler) throw MathError("atom [" + a->name + "] has no Euler characteristic");
        atoms *= *a->euler;
      }
      total += atoms * p.at_one();
    }
    return total;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, p] : terms_) {
      std::string t;
      bool negative = false;
      std::string atoms = atom_string(m);
      if (atoms.empty()) {
        t = p.to_string();
        if (t[0] == '-') {
          negative = true;
          t = t.substr(1);
        }
      } else if (p.is_single_term()) {
        const auto& [k, c] = *p.terms().begin();
        negative = c < 0;
        Integer mag = negative ? Integer(-c) : c;
        if (mag == 1 && k == 0)
          t = atoms;
        else
          t = LaurentPoly::monomial_string(mag, k) + "*" + atoms;
      } else {
        t = "(" + p.to_string() + ")*" + atoms;
      }
      if (first)
        out = negative ? "-" + t : t;
      else
        out += negative ? " - " + t : " + " + t;
      first = false;
    }
    return out;
  }

 private:
  static std::string atom_string(const AtomMonomial& m) {
    std::string out;
    for (std::size_t i = 0; i < m.size();) {
      std::size_t j = i;
      while (j < m.size() && m[j]->name == m[i]->name) ++j;
      if (!out.empty()) out += "*";
      out += "[" + m[i]->name + "]";
      if (j - i > 1) out += "^" + std::to_string(j - i);
      i = j;
    }
    return out;
  }

  void add(const AtomMonomial& m, const LaurentPoly& p) {
    if (p.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, p);
      return;
    }
    it->second += p;
    if (it->second.is_zero()) terms_.erase(it);
  }

  TermMap terms_;
};

namespace detail {

class ClassParser {
 public:
  ClassParser(Lexer& lex, const AtomTable& atoms) : lex_(lex), atoms_(atoms) {}

  VirtualClass expression() {
    VirtualClass acc = term();
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
  VirtualClass term() {
    VirtualClass acc = unary();
    while (lex_.accept("*")) acc *= unary();
    return acc;
  }
  VirtualClass unary() {
    if (lex_.accept("-")) return -unary();
    if (lex_.accept("+")) return unary();
    return power();
  }
  VirtualClass power() {
    VirtualClass base = primary();
    if (lex_.accept("^")) {
      bool negative = lex_.accept("-");
      if (lex_.peek().kind != Token::Kind::Integer) lex_.fail("expected an integer exponent");
      long e = std::stol(lex_.take().text);
      return base.pow(negative ? -e : e);
    }
    return base;
  }
  VirtualClass primary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Integer) return VirtualClass::integer(Integer(lex_.take().text));
    if (t.kind == Token::Kind::Identifier) {
      Token id = lex_.take();
      if (id.text == "L") return VirtualClass::lefschetz();
      throw ParseError("unknown symbol '" + id.text + "' (atoms are written [Name])", id.position);
    }
    if (t.kind == Token::Kind::Bracketed) {
      Token a = lex_.take();
      auto it = atoms_.find(a.text);
      if (it == atoms_.end()) throw ParseError("undeclared atom [" + a.text + "]", a.position);
      return VirtualClass::atom(it->second);
    }
    if (lex_.accept("(")) {
      VirtualClass inner = expression();
      lex_.expect(")");
      return inner;
    }
    lex_.fail("expected a number, L, [Atom] or '('");
  }

  Lexer& lex_;
  const AtomTable& atoms_;
};

}  // namespace detail

/// Parses the canonical text form, e.g. "(L^2 - 1)*[E] + 3*L^-1".
inline VirtualClass parse_class(std::string_view text, const AtomTable& atoms = {}) {
  Lexer lex(text);
  detail::ClassParser parser(lex, atoms);
  VirtualClass v = parser.expression();
  if (lex.peek().kind != Token::Kind::End) lex.fail("unexpected trailing input");
  return v;
}

inline VirtualClass operator*(const VirtualClass& a, long long c) { return a * VirtualClass::integer(c); }

}  // namespace motint
