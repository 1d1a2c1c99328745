#pragma once

#include "motint/polyalg/poly.hpp"
#include "motint/scheme/model.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace motint {

/// w_j = sum_{i <= j} p^i a_i^{p^{j-i}} for integer components.
inline std::vector<Integer> ghost(std::uint64_t p, const std::vector<Integer>& a) {
  std::vector<Integer> w;
  for (std::size_t j = 0; j < a.size(); ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i <= j; ++i)
      s += ipow(Integer(p), i) * boost::multiprecision::pow(a[i], static_cast<unsigned>(ipow(Integer(p), j - i)));
    w.push_back(s);
  }
  return w;
}

/// Universal addition, multiplication and negation polynomials S_j, P_j, N_j of
/// W_m over Z in variables a_0..a_{m-1}, b_0..b_{m-1}.
struct WittStructure {
  std::uint64_t p = 2;
  unsigned length = 1;
  std::vector<std::string> vars;
  std::vector<IntPoly> sum, product, negation;
};

namespace detail {

inline IntPoly ghost_poly(std::uint64_t p, const std::vector<IntPoly>& x, std::size_t j) {
  IntPoly s(IntegerRing{}, x[0].vars());
  for (std::size_t i = 0; i <= j; ++i)
    s += x[i].pow(static_cast<unsigned>(ipow(Integer(p), j - i))).scaled(ipow(Integer(p), i));
  return s;
}

/// Solves ghost(X) = target component by component, checking that every
/// division by p^j is exact.
inline std::vector<IntPoly> solve_ghost(std::uint64_t p, unsigned m, const std::vector<IntPoly>& target) {
  std::vector<IntPoly> x;
  for (std::size_t j = 0; j < m; ++j) {
    IntPoly r = target[j];
    for (std::size_t i = 0; i < j; ++i)
      r -= x[i].pow(static_cast<unsigned>(ipow(Integer(p), j - i))).scaled(ipow(Integer(p), i));
    const Integer pj = ipow(Integer(p), j);
    IntPoly q(IntegerRing{}, r.vars());
    for (const auto& [mono, c] : r.terms()) {
      if (c % pj != 0)
        throw MathError("Witt structure polynomial " + std::to_string(j) + " is not integral for p = " +
                        std::to_string(p));
      q.add_term(mono, c / pj);
    }
    x.push_back(std::move(q));
  }
  return x;
}

inline WittStructure derive_witt_structure(std::uint64_t p, unsigned m) {
  WittStructure w;
  w.p = p;
  w.length = m;
  for (unsigned i = 0; i < m; ++i) w.vars.push_back("a" + std::to_string(i));
  for (unsigned i = 0; i < m; ++i) w.vars.push_back("b" + std::to_string(i));
  std::vector<IntPoly> a, b;
  for (unsigned i = 0; i < m; ++i) {
    a.push_back(IntPoly::variable(IntegerRing{}, w.vars, i));
    b.push_back(IntPoly::variable(IntegerRing{}, w.vars, m + i));
  }
  std::vector<IntPoly> gsum, gprod, gneg;
  for (unsigned j = 0; j < m; ++j) {
    auto ga = ghost_poly(p, a, j), gb = ghost_poly(p, b, j);
    gsum.push_back(ga + gb);
    gprod.push_back(ga * gb);
    gneg.push_back(-ga);
  }
  w.sum = solve_ghost(p, m, gsum);
  w.product = solve_ghost(p, m, gprod);
  w.negation = solve_ghost(p, m, gneg);
  return w;
}

}  // namespace detail

/// Cached per (p, length); entries are never modified once inserted.
inline const WittStructure& witt_structure(std::uint64_t p, unsigned m) {
  if (!is_prime(p)) throw MathError("Witt vectors need a prime p, got " + std::to_string(p));
  if (m == 0) throw MathError("Witt vectors need length at least 1");
  static std::mutex mutex;
  static std::map<std::pair<std::uint64_t, unsigned>, std::unique_ptr<const WittStructure>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{p, m}];
  if (!slot) slot = std::make_unique<const WittStructure>(detail::derive_witt_structure(p, m));
  return *slot;
}

/// Witt vector of finite length with components in F_q, q a power of p.
struct WittVector {
  FiniteField field = FiniteField::prime(2);
  std::vector<FiniteField::value_type> comps;

  std::uint64_t prime() const { return field.characteristic(); }
  unsigned length() const { return static_cast<unsigned>(comps.size()); }
  bool operator==(const WittVector& o) const { return field == o.field && comps == o.comps; }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < comps.size(); ++i) s += (i ? "," : "") + field.format(comps[i]);
    return s + ")";
  }
};

namespace detail {

inline void check_pair(const WittVector& a, const WittVector& b) {
  if (!(a.field == b.field) || a.comps.size() != b.comps.size())
    throw MathError("Witt vectors with different fields or lengths");
  if (a.comps.empty()) throw MathError("Witt vectors need length at least 1");
}

inline WittVector apply(const std::vector<IntPoly>& polys, const WittVector& a, const WittVector& b) {
  std::vector<FiniteField::value_type> vals = a.comps;
  vals.insert(vals.end(), b.comps.begin(), b.comps.end());
  WittVector out{a.field, {}};
  for (const auto& f : polys) out.comps.push_back(FieldPoly(f, a.field)(vals));
  return out;
}

}  // namespace detail

inline WittVector witt_add(const WittVector& a, const WittVector& b) {
  detail::check_pair(a, b);
  return detail::apply(witt_structure(a.prime(), a.length()).sum, a, b);
}

inline WittVector witt_mul(const WittVector& a, const WittVector& b) {
  detail::check_pair(a, b);
  return detail::apply(witt_structure(a.prime(), a.length()).product, a, b);
}

inline WittVector witt_neg(const WittVector& a) {
  detail::check_pair(a, a);
  return detail::apply(witt_structure(a.prime(), a.length()).negation, a, a);
}

inline WittVector witt_zero(const FiniteField& field, unsigned m) { return {field, std::vector<FiniteField::value_type>(m, 0)}; }

inline WittVector witt_one(const FiniteField& field, unsigned m) {
  auto w = witt_zero(field, m);
  w.comps[0] = 1;
  return w;
}

/// Componentwise structure polynomials applied over Z (no reduction).
inline std::vector<Integer> witt_add_integral(std::uint64_t p, const std::vector<Integer>& a,
                                              const std::vector<Integer>& b) {
  std::vector<Integer> vals = a;
  vals.insert(vals.end(), b.begin(), b.end());
  std::vector<Integer> out;
  for (const auto& f : witt_structure(p, static_cast<unsigned>(a.size())).sum)
    out.push_back(f.evaluate(IntegerRing{}, std::span<const Integer>(vals)));
  return out;
}

inline std::vector<Integer> witt_mul_integral(std::uint64_t p, const std::vector<Integer>& a,
                                              const std::vector<Integer>& b) {
  std::vector<Integer> vals = a;
  vals.insert(vals.end(), b.begin(), b.end());
  std::vector<Integer> out;
  for (const auto& f : witt_structure(p, static_cast<unsigned>(a.size())).product)
    out.push_back(f.evaluate(IntegerRing{}, std::span<const Integer>(vals)));
  return out;
}

/// Teichmuller representative of a in Z/p^m: a^{p^{m-1}}.
inline Integer teichmuller(std::uint64_t p, unsigned m, std::uint64_t a) {
  const Integer mod = ipow(Integer(p), m);
  return boost::multiprecision::powm(Integer(a), ipow(Integer(p), m - 1), mod);
}

/// W_m(F_p) -> Z/p^m, (a_i) -> sum p^i tau(a_i).
inline Integer witt_to_residue(const WittVector& w) {
  if (w.field.degree() != 1) throw MathError("residue identification needs components in F_p");
  const std::uint64_t p = w.prime();
  const unsigned m = w.length();
  const Integer mod = ipow(Integer(p), m);
  Integer r = 0;
  for (unsigned i = 0; i < m; ++i) r += ipow(Integer(p), i) * teichmuller(p, m, w.comps[i]);
  return mod_floor(r, mod);
}

inline WittVector residue_to_witt(std::uint64_t p, unsigned m, const Integer& r) {
  const Integer mod = ipow(Integer(p), m);
  Integer cur = mod_floor(r, mod);
  WittVector w{FiniteField::prime(p), {}};
  for (unsigned i = 0; i < m; ++i) {
    const Integer pi = ipow(Integer(p), i);
    auto a = static_cast<std::uint64_t>((cur / pi) % p);
    w.comps.push_back(static_cast<FiniteField::value_type>(a));
    cur = mod_floor(cur - pi * teichmuller(p, m, a), mod);
  }
  return w;
}

/// Evaluates an integer polynomial on Witt vectors of common length.
inline WittVector witt_evaluate(const IntPoly& f, const std::vector<WittVector>& xs, std::uint64_t p, unsigned m) {
  const auto field = FiniteField::prime(p);
  WittVector acc = witt_zero(field, m);
  for (const auto& [mono, c] : f.terms()) {
    WittVector term = residue_to_witt(p, m, c);
    for (std::size_t i = 0; i < mono.size(); ++i)
      for (unsigned e = 0; e < mono[i]; ++e) term = witt_mul(term, xs[i]);
    acc = witt_add(acc, term);
  }
  return acc;
}

/// |X(W_{n+1}(F_p))| by brute force over Witt coordinates; independent of the
/// residue-ring enumeration used in mixed mode.
inline Integer count_witt_points(const AffineModel& X, std::uint64_t p, unsigned level) {
  const unsigned m = level + 1;
  const auto field = FiniteField::prime(p);
  const std::size_t N = X.ambient_dim();
  std::vector<WittVector> xs(N, witt_zero(field, m));
  Integer count = 0;
  while (true) {
    bool ok = true;
    for (const auto& f : X.equations) {
      auto v = witt_evaluate(f, xs, p, m);
      if (std::any_of(v.comps.begin(), v.comps.end(), [](auto c) { return c != 0; })) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
    std::size_t i = 0;
    for (; i < N * m; ++i) {
      auto& c = xs[i / m].comps[i % m];
      if (++c < p) break;
      c = 0;
    }
    if (i == N * m) break;
  }
  return count;
}

}  // namespace motint
