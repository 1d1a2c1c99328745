#pragma once

#include "motint/polyalg/series.hpp"
#include "motint/scheme/model.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace motint {

enum class JetMode { Series, Mixed };

inline std::string to_string(JetMode m) { return m == JetMode::Series ? "series" : "mixed"; }

/// A point of Gr_n: for each ambient variable the digits a_0..a_n of a
/// truncated series sum a_k t^k, or of a residue sum a_k p^k mod p^{n+1}.
struct JetPoint {
  JetMode mode = JetMode::Series;
  FiniteField field = FiniteField::prime(2);
  unsigned level = 0;
  std::vector<Series> digits;

  std::size_t nvars() const { return digits.size(); }

  FieldPoint base_point() const {
    FieldPoint p;
    for (const auto& d : digits) p.push_back(d.at(0));
    return p;
  }

  /// Residue of one coordinate in Z/p^{level+1} (mixed mode).
  Integer residue(std::size_t var) const {
    Integer r = 0;
    for (std::size_t k = digits[var].size(); k-- > 0;) r = r * field.characteristic() + digits[var][k];
    return r;
  }

  bool operator==(const JetPoint& o) const { return level == o.level && mode == o.mode && digits == o.digits; }
  bool operator<(const JetPoint& o) const { return digits < o.digits; }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (i) s += ", ";
      if (mode == JetMode::Mixed) {
        s += residue(i).str();
        continue;
      }
      TruncatedSeries<FiniteField> ring(field, level);
      s += ring.format(digits[i]);
    }
    return s + ")";
  }
};

/// Integer polynomial compiled for repeated evaluation on jets.
class JetPoly {
 public:
  JetPoly(const IntPoly& f, const FiniteField& field) : field_(field), source_(f) {
    for (const auto& [m, c] : f.terms()) terms_.push_back({m, c, field.from_integer(c)});
  }

  const IntPoly& source() const { return source_; }

  /// f evaluated on truncated series of common length len.
  Series eval_series(std::span<const Series> xs, std::size_t len) const {
    Series acc(len, 0);
    std::vector<std::vector<Series>> powers(xs.size());
    for (const auto& t : terms_) {
      if (t.reduced == 0) continue;
      Series term(len, 0);
      term[0] = t.reduced;
      for (std::size_t i = 0; i < t.exps.size(); ++i)
        if (t.exps[i]) term = mul(term, power(powers[i], xs[i], t.exps[i], len), len);
      for (std::size_t k = 0; k < len; ++k) acc[k] = field_.add(acc[k], term[k]);
    }
    return acc;
  }

  /// f evaluated on residues modulo `mod` (mod < 2^62).
  std::uint64_t eval_residue(std::span<const std::uint64_t> xs, std::uint64_t mod) const {
    std::uint64_t acc = 0;
    for (const auto& t : terms_) {
      auto c = static_cast<std::uint64_t>(mod_floor(t.coeff, Integer(mod)));
      for (std::size_t i = 0; i < t.exps.size() && c; ++i)
        for (unsigned e = 0; e < t.exps[i]; ++e) c = mulmod(c, xs[i], mod);
      acc = (acc + c) % mod;
    }
    return acc;
  }

  static std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
  }

 private:
  struct Term {
    Monomial exps;
    Integer coeff;
    FiniteField::value_type reduced;
  };

  Series mul(const Series& a, const Series& b, std::size_t len) const {
    Series c(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; i + j < len; ++j)
        if (b[j]) c[i + j] = field_.add(c[i + j], field_.mul(a[i], b[j]));
    }
    return c;
  }

  const Series& power(std::vector<Series>& cache, const Series& x, unsigned e, std::size_t len) const {
    if (cache.empty()) {
      Series one(len, 0);
      one[0] = 1;
      cache.push_back(one);
    }
    while (cache.size() <= e) cache.push_back(mul(cache.back(), x, len));
    return cache[e];
  }

  FiniteField field_;
  IntPoly source_;
  std::vector<Term> terms_;
};

/// Order of a function along a jet: exact, or only known to be >= value.
struct Order {
  long value = 0;
  bool at_least = false;

  std::string to_string() const { return (at_least ? ">= " : "") + std::to_string(value); }
  bool operator==(const Order&) const = default;
};

inline Order min_order(const Order& a, const Order& b) {
  if (a.at_least && b.at_least) return {std::min(a.value, b.value), true};
  if (a.at_least) return a.value <= b.value ? Order{a.value, true} : b;
  if (b.at_least) return b.value <= a.value ? Order{b.value, true} : a;
  return a.value <= b.value ? a : b;
}

inline std::uint64_t checked_prime_power(std::uint64_t p, unsigned e) {
  unsigned __int128 m = 1;
  for (unsigned i = 0; i < e; ++i) {
    m *= p;
    if (m >= (static_cast<unsigned __int128>(1) << 62))
      throw MathError("mixed mode: p^" + std::to_string(e) + " exceeds 2^62");
  }
  return static_cast<std::uint64_t>(m);
}

/// Residues of every coordinate modulo p^len.
inline std::vector<std::uint64_t> jet_residues(const JetPoint& j, std::size_t len) {
  const std::uint64_t p = j.field.characteristic();
  std::vector<std::uint64_t> out;
  for (const auto& d : j.digits) {
    std::uint64_t r = 0;
    for (std::size_t k = std::min(len, d.size()); k-- > 0;) r = r * p + d[k];
    out.push_back(r);
  }
  return out;
}

/// Digits of f(j) through t^level (or p^level).
inline Series evaluate_on_jet(const JetPoly& f, const JetPoint& j) {
  const std::size_t len = j.level + 1;
  if (j.mode == JetMode::Series) return f.eval_series(j.digits, len);
  const std::uint64_t p = j.field.characteristic();
  auto r = f.eval_residue(jet_residues(j, len), checked_prime_power(p, static_cast<unsigned>(len)));
  Series out(len, 0);
  for (std::size_t k = 0; k < len; ++k, r /= p) out[k] = static_cast<FiniteField::value_type>(r % p);
  return out;
}

inline Order order_of_digits(const Series& s) {
  auto o = series_order(s);
  return o == s.size() ? Order{static_cast<long>(o), true} : Order{static_cast<long>(o), false};
}

/// ord_t (or ord_p) of f along j.
inline Order ord_function(const IntPoly& f, const JetPoint& j) {
  if (f.nvars() != j.nvars()) throw MathError("ord_function: polynomial and jet have different variable counts");
  return order_of_digits(evaluate_on_jet(JetPoly(f, j.field), j));
}

inline void check_jet(const AffineModel& X, const JetPoint& j) {
  if (j.nvars() != X.ambient_dim()) throw ModelError("jet has " + std::to_string(j.nvars()) + " coordinates, " +
                                                     X.name + " has " + std::to_string(X.ambient_dim()));
  if (j.mode == JetMode::Mixed && j.field.degree() != 1)
    throw MathError("mixed mode needs a prime residue field");
  const auto q = j.field.order();
  const auto p = j.field.characteristic();
  for (const auto& d : j.digits) {
    if (d.size() != j.level + 1) throw MathError("jet digits do not match its level");
    for (auto x : d)
      if (x >= (j.mode == JetMode::Mixed ? p : q)) throw MathError("jet digit out of range");
  }
  for (const auto& f : X.equations) {
    auto v = evaluate_on_jet(JetPoly(f, j.field), j);
    if (series_order(v) != v.size())
      throw ModelError("jet " + j.to_string() + " does not satisfy " + f.to_string() + " at level " +
                       std::to_string(j.level));
  }
}

inline JetPoint make_jet(const AffineModel& X, JetMode mode, const FiniteField& field, unsigned level,
                         std::vector<Series> digits) {
  JetPoint j{mode, field, level, std::move(digits)};
  check_jet(X, j);
  return j;
}

/// Jet from residues mod p^{level+1} (mixed mode).
inline JetPoint make_mixed_jet(const AffineModel& X, std::uint64_t p, unsigned level,
                               const std::vector<Integer>& residues) {
  std::vector<Series> digits;
  for (auto r : residues) {
    r = mod_floor(r, ipow(Integer(p), level + 1));
    Series d;
    for (unsigned k = 0; k <= level; ++k, r /= p) d.push_back(static_cast<FiniteField::value_type>(r % p));
    digits.push_back(d);
  }
  return make_jet(X, JetMode::Mixed, FiniteField::prime(p), level, std::move(digits));
}

/// theta: Gr_level -> Gr_m, coordinatewise truncation.
inline JetPoint truncate(const JetPoint& j, unsigned m) {
  if (m > j.level) throw MathError("cannot truncate a level-" + std::to_string(j.level) + " jet to level " +
                                   std::to_string(m));
  JetPoint out = j;
  out.level = m;
  for (auto& d : out.digits) d.resize(m + 1);
  return out;
}

}  // namespace motint
