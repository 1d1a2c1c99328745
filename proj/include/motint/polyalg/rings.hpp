#pragma once

#include "motint/polyalg/integer.hpp"

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace motint {

/// Coefficient rings used by MultiPoly. Each ring is a small value object
/// describing the ring; elements are plain values of R::value_type.
template <class R>
concept CoefficientRing = requires(const R& r, const typename R::value_type& a, const Integer& z) {
  { r.zero() } -> std::convertible_to<typename R::value_type>;
  { r.one() } -> std::convertible_to<typename R::value_type>;
  { r.from_integer(z) } -> std::convertible_to<typename R::value_type>;
  { r.add(a, a) } -> std::convertible_to<typename R::value_type>;
  { r.sub(a, a) } -> std::convertible_to<typename R::value_type>;
  { r.mul(a, a) } -> std::convertible_to<typename R::value_type>;
  { r.neg(a) } -> std::convertible_to<typename R::value_type>;
  { r.is_zero(a) } -> std::convertible_to<bool>;
  { r.equal(a, a) } -> std::convertible_to<bool>;
  { r.format(a) } -> std::convertible_to<std::string>;
  { r.is_compound(a) } -> std::convertible_to<bool>;
  { r.is_negative(a) } -> std::convertible_to<bool>;
  { r.symbol() } -> std::convertible_to<std::optional<std::string>>;
  { r.describe() } -> std::convertible_to<std::string>;
};

class IntegerRing {
 public:
  using value_type = Integer;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_integer(const Integer& z) const { return z; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  std::string format(const value_type& a) const { return a.str(); }
  bool is_compound(const value_type&) const { return false; }
  bool is_negative(const value_type& a) const { return a < 0; }
  std::optional<std::string> symbol() const { return std::nullopt; }
  value_type symbol_value() const { return 0; }
  std::string describe() const { return "ZZ"; }
  bool operator==(const IntegerRing&) const = default;
};

/// F_q for q = p^m. Elements are indices in [0, q): the base-p digits of an
/// index are the coefficients of the residue polynomial in the generator g,
/// so the prime subfield occupies indices [0, p). Arithmetic goes through
/// precomputed tables; q is limited to kMaxOrder.
class FiniteField {
 public:
  using value_type = std::uint32_t;
  static constexpr std::uint64_t kMaxOrder = 1U << 12;

  static FiniteField prime(std::uint64_t p) {
    if (!is_prime(p)) throw MathError("PrimeField: " + std::to_string(p) + " is not prime");
    return FiniteField(p, {0, 1});
  }

  /// F_{p^m} from a monic modulus given low-degree-first over F_p. The modulus
  /// is checked irreducible by trial division.
  static FiniteField extension(std::uint64_t p, std::vector<std::uint64_t> modulus) {
    if (!is_prime(p)) throw MathError("ExtField: " + std::to_string(p) + " is not prime");
    for (auto& c : modulus) c %= p;
    while (!modulus.empty() && modulus.back() == 0) modulus.pop_back();
    if (modulus.size() < 2) throw MathError("ExtField: modulus must have degree >= 1");
    if (modulus.back() != 1) throw MathError("ExtField: modulus must be monic");
    if (!is_irreducible(p, modulus)) throw MathError("ExtField: modulus is reducible over F_" + std::to_string(p));
    return FiniteField(p, std::move(modulus));
  }

  /// F_q with the first monic irreducible modulus in order of the integer
  /// whose base-p digits are the lower coefficients.
  static FiniteField of_order(std::uint64_t q) {
    auto [p, m] = prime_power_decompose(q);
    if (m == 1) return prime(p);
    std::uint64_t count = 1;
    for (unsigned i = 0; i < m; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::uint64_t> f(m + 1);
      std::uint64_t r = idx;
      for (unsigned i = 0; i < m; ++i, r /= p) f[i] = r % p;
      f[m] = 1;
      if (is_irreducible(p, f)) return FiniteField(p, std::move(f));
    }
    throw MathError("no irreducible polynomial found");
  }

  std::uint64_t characteristic() const { return tables_->p; }
  std::uint64_t order() const { return tables_->q; }
  unsigned degree() const { return static_cast<unsigned>(tables_->modulus.size() - 1); }
  const std::vector<std::uint64_t>& modulus() const { return tables_->modulus; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_integer(const Integer& z) const {
    return static_cast<value_type>(mod_floor(z, Integer(tables_->p)));
  }
  value_type from_int(long long z) const {
    long long p = static_cast<long long>(tables_->p);
    long long r = z % p;
    if (r < 0) r += p;
    return static_cast<value_type>(r);
  }
  value_type add(value_type a, value_type b) const { return tables_->add[a * tables_->q + b]; }
  value_type sub(value_type a, value_type b) const { return add(a, neg(b)); }
  value_type mul(value_type a, value_type b) const { return tables_->mul[a * tables_->q + b]; }
  value_type neg(value_type a) const { return tables_->neg[a]; }
  value_type inv(value_type a) const {
    if (a == 0) throw MathError("division by zero in F_" + std::to_string(tables_->q));
    return tables_->inv[a];
  }
  value_type pow(value_type a, std::uint64_t e) const {
    value_type r = 1;
    while (e > 0) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }
  bool is_zero(value_type a) const { return a == 0; }
  bool equal(value_type a, value_type b) const { return a == b; }
  bool is_compound(value_type a) const { return a >= tables_->p && nonzero_digits(a) > 1; }
  bool is_negative(value_type) const { return false; }

  /// Prime-subfield elements print as integers; others as polynomials in g.
  std::string format(value_type a) const {
    if (a < tables_->p) return std::to_string(a);
    std::vector<std::string> parts;
    auto digits = decode(a);
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (digits[i] == 0) continue;
      std::string mono = i == 0 ? "" : (i == 1 ? "g" : "g^" + std::to_string(i));
      if (mono.empty())
        parts.push_back(std::to_string(digits[i]));
      else if (digits[i] == 1)
        parts.push_back(mono);
      else
        parts.push_back(std::to_string(digits[i]) + "*" + mono);
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
    return out;
  }

  std::optional<std::string> symbol() const {
    if (degree() == 1) return std::nullopt;
    return std::string("g");
  }
  value_type symbol_value() const { return degree() == 1 ? 0 : static_cast<value_type>(tables_->p); }

  std::string describe() const {
    if (degree() == 1) return "GF(" + std::to_string(tables_->p) + ")";
    return "GF(" + std::to_string(tables_->q) + ")";
  }

  bool operator==(const FiniteField& other) const {
    return tables_->p == other.tables_->p && tables_->modulus == other.tables_->modulus;
  }

  std::vector<std::uint64_t> decode(value_type a) const {
    std::vector<std::uint64_t> digits(degree(), 0);
    for (unsigned i = 0; i < degree(); ++i) {
      digits[i] = a % tables_->p;
      a = static_cast<value_type>(a / tables_->p);
    }
    return digits;
  }

 private:
  struct Tables {
    std::uint64_t p = 0;
    std::uint64_t q = 0;
    std::vector<std::uint64_t> modulus;
    std::vector<value_type> add, mul, neg, inv;
  };

  FiniteField(std::uint64_t p, std::vector<std::uint64_t> modulus) {
    static std::mutex mutex;
    static std::map<std::vector<std::uint64_t>, std::shared_ptr<const Tables>> cache;
    std::vector<std::uint64_t> key = modulus;
    key.push_back(p);
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[key];
    if (!slot) slot = build_tables(p, std::move(modulus));
    tables_ = slot;
  }

  static std::shared_ptr<const Tables> build_tables(std::uint64_t p, std::vector<std::uint64_t> modulus) {
    auto t = std::make_shared<Tables>();
    t->p = p;
    t->modulus = std::move(modulus);
    const unsigned m = static_cast<unsigned>(t->modulus.size() - 1);
    std::uint64_t q = 1;
    for (unsigned i = 0; i < m; ++i) {
      q *= p;
      if (q > kMaxOrder) throw MathError("field order exceeds table limit " + std::to_string(kMaxOrder));
    }
    t->q = q;
    std::vector<std::uint64_t> digits(q * m);
    for (std::uint64_t a = 0; a < q; ++a) {
      std::uint64_t r = a;
      for (unsigned i = 0; i < m; ++i, r /= p) digits[a * m + i] = r % p;
    }
    auto encode = [&](const std::uint64_t* d) {
      std::uint64_t a = 0;
      for (unsigned i = m; i-- > 0;) a = a * p + d[i];
      return static_cast<value_type>(a);
    };
    auto slow_mul = [&](std::uint64_t a, std::uint64_t b) {
      std::uint64_t prod[2 * 16] = {};
      for (unsigned i = 0; i < m; ++i)
        for (unsigned j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + digits[a * m + i] * digits[b * m + j]) % p;
      for (unsigned k = 2 * m; k-- > m;) {
        std::uint64_t c = prod[k];
        if (c == 0) continue;
        for (unsigned i = 0; i <= m; ++i) prod[k - m + i] = (prod[k - m + i] + (p - c) * t->modulus[i]) % p;
      }
      return encode(prod);
    };
    t->add.resize(q * q);
    t->neg.resize(q);
    std::uint64_t tmp[16];
    for (std::uint64_t a = 0; a < q; ++a) {
      for (unsigned i = 0; i < m; ++i) tmp[i] = (p - digits[a * m + i]) % p;
      t->neg[a] = encode(tmp);
      for (std::uint64_t b = 0; b < q; ++b) {
        for (unsigned i = 0; i < m; ++i) tmp[i] = (digits[a * m + i] + digits[b * m + i]) % p;
        t->add[a * q + b] = encode(tmp);
      }
    }
    // exp/log tables from a primitive element
    std::vector<value_type> exp(q - 1), log(q, 0);
    for (std::uint64_t g = 1; g < q; ++g) {
      std::uint64_t x = 1, k = 0;
      do {
        exp[k++] = static_cast<value_type>(x);
        x = slow_mul(x, g);
      } while (x != 1 && k < q - 1);
      if (x == 1 && k == q - 1) break;
    }
    for (std::uint64_t k = 0; k + 1 < q; ++k) log[exp[k]] = static_cast<value_type>(k);
    t->mul.assign(q * q, 0);
    t->inv.assign(q, 0);
    for (std::uint64_t a = 1; a < q; ++a) {
      t->inv[a] = exp[(q - 1 - log[a]) % (q - 1)];
      for (std::uint64_t b = 1; b < q; ++b) t->mul[a * q + b] = exp[(log[a] + log[b]) % (q - 1)];
    }
    return t;
  }

  unsigned nonzero_digits(value_type a) const {
    unsigned n = 0;
    for (auto d : decode(a)) n += d != 0;
    return n;
  }

  static std::vector<std::uint64_t> poly_mod(std::vector<std::uint64_t> a, const std::vector<std::uint64_t>& b,
                                             std::uint64_t p) {
    // b monic
    while (a.size() >= b.size()) {
      std::uint64_t c = a.back() % p;
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + (p - c) * b[i]) % p;
      a.pop_back();
      while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
  }

  static bool is_irreducible(std::uint64_t p, const std::vector<std::uint64_t>& f) {
    const std::size_t m = f.size() - 1;
    for (std::size_t deg = 1; deg <= m / 2; ++deg) {
      std::uint64_t count = 1;
      for (std::size_t i = 0; i < deg; ++i) count *= p;
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<std::uint64_t> g(deg + 1);
        std::uint64_t r = idx;
        for (std::size_t i = 0; i < deg; ++i) {
          g[i] = r % p;
          r /= p;
        }
        g[deg] = 1;
        if (poly_mod(f, g, p).empty()) return false;
      }
    }
    return true;
  }

  std::shared_ptr<const Tables> tables_;
};

/// Z / p^e.
class ResidueRing {
 public:
  using value_type = Integer;

  ResidueRing(std::uint64_t p, unsigned exponent) : p_(p), exponent_(exponent) {
    if (!is_prime(p)) throw MathError("ResidueRing: " + std::to_string(p) + " is not prime");
    if (exponent < 1) throw MathError("ResidueRing: exponent must be >= 1");
    modulus_ = ipow(Integer(p), exponent);
  }

  std::uint64_t prime() const { return p_; }
  unsigned exponent() const { return exponent_; }
  const Integer& modulus() const { return modulus_; }

  value_type zero() const { return 0; }
  value_type one() const { return modulus_ == 1 ? 0 : 1; }
  value_type from_integer(const Integer& z) const { return mod_floor(z, modulus_); }
  value_type add(const value_type& a, const value_type& b) const { return mod_floor(a + b, modulus_); }
  value_type sub(const value_type& a, const value_type& b) const { return mod_floor(a - b, modulus_); }
  value_type mul(const value_type& a, const value_type& b) const { return mod_floor(a * b, modulus_); }
  value_type neg(const value_type& a) const { return mod_floor(-a, modulus_); }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  std::string format(const value_type& a) const { return a.str(); }
  bool is_compound(const value_type&) const { return false; }
  bool is_negative(const value_type&) const { return false; }
  std::optional<std::string> symbol() const { return std::nullopt; }
  value_type symbol_value() const { return 0; }
  std::string describe() const { return "Z/" + std::to_string(p_) + "^" + std::to_string(exponent_); }
  bool operator==(const ResidueRing& o) const { return p_ == o.p_ && exponent_ == o.exponent_; }

 private:
  std::uint64_t p_;
  unsigned exponent_;
  Integer modulus_;
};

/// Base[t] / t^{n+1} over a field. Elements are coefficient vectors of length
/// n + 1, lowest degree first.
template <class Base>
class TruncatedSeries {
 public:
  using base_value = typename Base::value_type;
  using value_type = std::vector<base_value>;

  TruncatedSeries(Base base, unsigned level) : base_(std::move(base)), level_(level) {}

  const Base& base() const { return base_; }
  unsigned level() const { return level_; }
  std::size_t length() const { return level_ + 1; }

  value_type zero() const { return value_type(length(), base_.zero()); }
  value_type one() const {
    auto v = zero();
    v[0] = base_.one();
    return v;
  }
  value_type constant(const base_value& c) const {
    auto v = zero();
    v[0] = c;
    return v;
  }
  value_type from_integer(const Integer& z) const { return constant(base_.from_integer(z)); }
  value_type add(const value_type& a, const value_type& b) const {
    check(a), check(b);
    value_type r(length());
    for (std::size_t i = 0; i < length(); ++i) r[i] = base_.add(a[i], b[i]);
    return r;
  }
  value_type sub(const value_type& a, const value_type& b) const {
    check(a), check(b);
    value_type r(length());
    for (std::size_t i = 0; i < length(); ++i) r[i] = base_.sub(a[i], b[i]);
    return r;
  }
  value_type neg(const value_type& a) const {
    check(a);
    value_type r(length());
    for (std::size_t i = 0; i < length(); ++i) r[i] = base_.neg(a[i]);
    return r;
  }
  value_type mul(const value_type& a, const value_type& b) const {
    check(a), check(b);
    value_type r = zero();
    for (std::size_t i = 0; i < length(); ++i) {
      if (base_.is_zero(a[i])) continue;
      for (std::size_t j = 0; i + j < length(); ++j) r[i + j] = base_.add(r[i + j], base_.mul(a[i], b[j]));
    }
    return r;
  }
  bool is_zero(const value_type& a) const {
    return std::all_of(a.begin(), a.end(), [&](const base_value& c) { return base_.is_zero(c); });
  }
  bool equal(const value_type& a, const value_type& b) const {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!base_.equal(a[i], b[i])) return false;
    return true;
  }
  bool is_negative(const value_type&) const { return false; }
  bool is_compound(const value_type& a) const {
    std::size_t nz = 0;
    bool compound_coeff = false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!base_.is_zero(a[i])) {
        ++nz;
        compound_coeff = compound_coeff || base_.is_compound(a[i]);
      }
    return nz > 1 || compound_coeff;
  }
  std::string format(const value_type& a) const {
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (base_.is_zero(a[i])) continue;
      std::string c = base_.format(a[i]);
      if (base_.is_compound(a[i])) c = "(" + c + ")";
      std::string mono = i == 0 ? "" : (i == 1 ? "t" : "t^" + std::to_string(i));
      std::string term;
      if (mono.empty())
        term = c;
      else if (c == "1")
        term = mono;
      else
        term = c + "*" + mono;
      out += (out.empty() ? "" : " + ") + term;
    }
    return out.empty() ? "0" : out;
  }
  std::optional<std::string> symbol() const { return std::string("t"); }
  value_type symbol_value() const {
    auto v = zero();
    if (length() > 1) v[1] = base_.one();
    return v;
  }
  std::string describe() const { return base_.describe() + "[t]/t^" + std::to_string(level_ + 1); }
  bool operator==(const TruncatedSeries& o) const { return base_ == o.base_ && level_ == o.level_; }

  /// Coordinatewise truncation to a lower level.
  value_type truncate(const value_type& a, unsigned m) const {
    if (m > level_) throw MathError("cannot truncate a level-" + std::to_string(level_) + " series to level " +
                                    std::to_string(m));
    return value_type(a.begin(), a.begin() + m + 1);
  }

 private:
  void check(const value_type& a) const {
    if (a.size() != length())
      throw MathError("series level mismatch: expected length " + std::to_string(length()) + ", got " +
                      std::to_string(a.size()));
  }

  Base base_;
  unsigned level_;
};

}  // namespace motint
