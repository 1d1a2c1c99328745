#pragma once

#include "motint/polyalg/rings.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace motint {

using Monomial = std::vector<unsigned>;

inline unsigned total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0U); }

/// Graded lexicographic order, largest first: higher total degree wins, ties
/// broken by comparing exponents in variable order.
struct GradedLexOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

/// Sparse multivariate polynomial over a coefficient ring. Zero coefficients
/// are never stored, so structural equality is ring equality.
template <CoefficientRing R>
class MultiPoly {
 public:
  using ring_type = R;
  using coeff_type = typename R::value_type;
  using TermMap = std::map<Monomial, coeff_type, GradedLexOrder>;

  MultiPoly(R ring, std::vector<std::string> vars) : ring_(std::move(ring)), vars_(std::move(vars)) {}

  static MultiPoly constant(R ring, std::vector<std::string> vars, const coeff_type& c) {
    MultiPoly p(std::move(ring), std::move(vars));
    p.add_term(Monomial(p.vars_.size(), 0), c);
    return p;
  }

  static MultiPoly variable(R ring, std::vector<std::string> vars, std::size_t index) {
    MultiPoly p(std::move(ring), std::move(vars));
    if (index >= p.vars_.size()) throw MathError("variable index out of range");
    Monomial m(p.vars_.size(), 0);
    m[index] = 1;
    p.add_term(m, p.ring_.one());
    return p;
  }

  const R& ring() const { return ring_; }
  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned total_degree() const { return terms_.empty() ? 0 : motint::total_degree(terms_.begin()->first); }

  unsigned degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
    return d;
  }

  coeff_type coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? ring_.zero() : it->second;
  }

  void add_term(const Monomial& m, const coeff_type& c) {
    if (m.size() != vars_.size()) throw MathError("exponent vector does not match variable count");
    if (ring_.is_zero(c)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
      return;
    }
    it->second = ring_.add(it->second, c);
    if (ring_.is_zero(it->second)) terms_.erase(it);
  }

  MultiPoly operator-() const {
    MultiPoly r(ring_, vars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, ring_.neg(c));
    return r;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, ring_.neg(c));
    return *this;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_compatible(b);
    MultiPoly r(a.ring_, a.vars_);
    Monomial m(a.vars_.size());
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, a.ring_.mul(ca, cb));
      }
    return r;
  }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  MultiPoly scaled(const coeff_type& c) const {
    MultiPoly r(ring_, vars_);
    for (const auto& [m, k] : terms_) r.add_term(m, ring_.mul(k, c));
    return r;
  }

  MultiPoly pow(unsigned e) const {
    MultiPoly result = constant(ring_, vars_, ring_.one());
    MultiPoly base = *this;
    while (e > 0) {
      if (e & 1U) result *= base;
      e >>= 1U;
      if (e > 0) base *= base;
    }
    return result;
  }

  bool operator==(const MultiPoly& o) const {
    if (!(ring_ == o.ring_) || vars_ != o.vars_ || terms_.size() != o.terms_.size()) return false;
    auto it = o.terms_.begin();
    for (const auto& [m, c] : terms_) {
      if (m != it->first || !ring_.equal(c, it->second)) return false;
      ++it;
    }
    return true;
  }

  MultiPoly derivative(std::size_t var) const {
    if (var >= vars_.size()) throw MathError("variable index out of range");
    MultiPoly r(ring_, vars_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial dm = m;
      --dm[var];
      r.add_term(dm, ring_.mul(c, ring_.from_integer(Integer(m[var]))));
    }
    return r;
  }

  /// Evaluates in a target ring S, mapping coefficients through `coeff_map`.
  template <class S, class CoeffMap>
  typename S::value_type evaluate(const S& target, std::span<const typename S::value_type> values,
                                  CoeffMap&& coeff_map) const {
    if (values.size() != vars_.size()) throw MathError("evaluation point has the wrong number of coordinates");
    std::vector<std::vector<typename S::value_type>> powers(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      unsigned d = degree_in(i);
      powers[i].reserve(d + 1);
      powers[i].push_back(target.one());
      for (unsigned k = 1; k <= d; ++k) powers[i].push_back(target.mul(powers[i].back(), values[i]));
    }
    typename S::value_type acc = target.zero();
    for (const auto& [m, c] : terms_) {
      typename S::value_type term = coeff_map(c);
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] > 0) term = target.mul(term, powers[i][m[i]]);
      acc = target.add(acc, term);
    }
    return acc;
  }

  /// Evaluation for integer polynomials into any ring (coefficients via from_integer).
  template <class S>
  typename S::value_type evaluate(const S& target, std::span<const typename S::value_type> values) const
    requires std::same_as<coeff_type, Integer>
  {
    return evaluate(target, values, [&](const Integer& c) { return target.from_integer(c); });
  }

  template <CoefficientRing S, class CoeffMap>
  MultiPoly<S> map_coefficients(S target, CoeffMap&& fn) const {
    MultiPoly<S> r(std::move(target), vars_);
    for (const auto& [m, c] : terms_) r.add_term(m, fn(c));
    return r;
  }

  /// Same polynomial viewed in a larger variable list (names must be present).
  MultiPoly with_vars(const std::vector<std::string>& new_vars) const {
    std::vector<std::size_t> index(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      auto it = std::find(new_vars.begin(), new_vars.end(), vars_[i]);
      if (it == new_vars.end()) {
        // variables that do not occur may be dropped
        if (degree_in(i) == 0) {
          index[i] = new_vars.size();
          continue;
        }
        throw MathError("variable '" + vars_[i] + "' missing from target variable list");
      }
      index[i] = static_cast<std::size_t>(it - new_vars.begin());
    }
    MultiPoly r(ring_, new_vars);
    for (const auto& [m, c] : terms_) {
      Monomial nm(new_vars.size(), 0);
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] > 0) nm[index[i]] += m[i];
      r.add_term(nm, c);
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      bool negative = ring_.is_negative(c);
      coeff_type mag = negative ? ring_.neg(c) : c;
      std::string mono = monomial_string(m);
      std::string coeff = ring_.format(mag);
      if (ring_.is_compound(mag)) coeff = "(" + coeff + ")";
      std::string term;
      if (mono.empty())
        term = coeff;
      else if (ring_.equal(mag, ring_.one()))
        term = mono;
      else
        term = coeff + "*" + mono;
      if (first)
        out = negative ? "-" + term : term;
      else
        out += negative ? " - " + term : " + " + term;
      first = false;
    }
    return out;
  }

 private:
  void check_compatible(const MultiPoly& o) const {
    if (!(ring_ == o.ring_)) throw MathError("polynomials over different rings: " + ring_.describe() + " vs " +
                                             o.ring_.describe());
    if (vars_ != o.vars_) throw MathError("polynomials over different variable lists");
  }

  std::string monomial_string(const Monomial& m) const {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!out.empty()) out += "*";
      out += vars_[i];
      if (m[i] > 1) out += "^" + std::to_string(m[i]);
    }
    return out;
  }

  R ring_;
  std::vector<std::string> vars_;
  TermMap terms_;
};

using IntPoly = MultiPoly<IntegerRing>;

/// Reduces an integer polynomial into another coefficient ring.
template <CoefficientRing S>
MultiPoly<S> reduce(const IntPoly& f, S target) {
  const S& t = target;
  return f.map_coefficients(target, [&](const Integer& c) { return t.from_integer(c); });
}

}  // namespace motint
