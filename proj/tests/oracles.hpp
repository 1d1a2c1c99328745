#pragma once

#include "motint/io/model_file.hpp"
#include "motint/measure/integral.hpp"

#include <random>
#include <set>

namespace motint::testing {

inline std::string model_path(const std::string& name) { return std::string(MOTINT_MODELS_DIR) + "/" + name; }

inline AffineModel load_model(const std::string& name) { return load_library(model_path(name)).model(); }

inline ModelLibrary load(const std::string& name) { return load_library(model_path(name)); }

/// All tuples of `n` values in [0, base), first coordinate fastest.
template <class F>
void for_each_tuple(std::size_t n, std::uint64_t base, F&& visit) {
  std::vector<std::uint64_t> t(n, 0);
  while (true) {
    visit(t);
    std::size_t i = 0;
    while (i < n && ++t[i] == base) t[i++] = 0;
    if (i == n) return;
  }
}

/// Every level-n jet of X over F_q, found by substituting all q^{(n+1)N}
/// tuples of truncated series. Digits are returned per variable.
inline std::set<std::vector<Series>> brute_series_jets(const AffineModel& X, const FiniteField& F, unsigned n) {
  std::set<std::vector<Series>> out;
  const std::size_t N = X.ambient_dim();
  for_each_tuple(N * (n + 1), F.order(), [&](const std::vector<std::uint64_t>& t) {
    std::vector<Series> xs(N, Series(n + 1));
    for (std::size_t v = 0; v < N; ++v)
      for (unsigned k = 0; k <= n; ++k) xs[v][k] = static_cast<FiniteField::value_type>(t[v * (n + 1) + k]);
    for (const auto& f : X.equations) {
      auto v = substitute_series(f, xs, F, n);
      if (!std::all_of(v.begin(), v.end(), [](auto c) { return c == 0; })) return;
    }
    out.insert(xs);
  });
  return out;
}

/// Every point of X over Z/p^{n+1}, by evaluating over all residues.
inline std::set<std::vector<Integer>> brute_mixed_points(const AffineModel& X, std::uint64_t p, unsigned n) {
  std::set<std::vector<Integer>> out;
  ResidueRing R(p, n + 1);
  const std::size_t N = X.ambient_dim();
  std::uint64_t mod = static_cast<std::uint64_t>(R.modulus());
  for_each_tuple(N, mod, [&](const std::vector<std::uint64_t>& t) {
    std::vector<Integer> xs(t.begin(), t.end());
    for (const auto& f : X.equations)
      if (f.evaluate(R, std::span<const Integer>(xs)) != 0) return;
    out.insert(xs);
  });
  return out;
}

/// Determinant by the Leibniz permutation sum.
inline IntPoly leibniz_det(const PolyMatrix& m, const std::vector<std::string>& vars) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  IntPoly acc(IntegerRing{}, vars);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    IntPoly term = IntPoly::constant(IntegerRing{}, vars, inversions % 2 ? -1 : 1);
    for (std::size_t i = 0; i < n; ++i) term = term * m[i][perm[i]];
    acc += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

/// sum_{k <= M} (1 - 1/q) q^{-2k}, the ball integral of q^{-ord x} up to M.
inline Rational ball_partial(const Integer& q, unsigned M) {
  Rational s = 0;
  for (unsigned k = 0; k <= M; ++k) s += (Rational(1) - Rational(1, q)) * qpow(q, -2 * static_cast<long>(k));
  return s;
}

class Gen {
 public:
  explicit Gen(std::uint32_t seed = 20240611) : rng_(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  IntPoly poly(const std::vector<std::string>& vars, unsigned max_terms, unsigned max_deg, long coeff = 4) {
    IntPoly f(IntegerRing{}, vars);
    auto terms = uniform(0, max_terms);
    for (long i = 0; i < terms; ++i) {
      Monomial m(vars.size());
      for (auto& e : m) e = static_cast<unsigned>(uniform(0, max_deg));
      f.add_term(m, Integer(uniform(-coeff, coeff)));
    }
    return f;
  }

  LaurentPoly laurent(long lo = -4, long hi = 4, unsigned max_terms = 4) {
    LaurentPoly p;
    auto terms = uniform(0, max_terms);
    for (long i = 0; i < terms; ++i) p += LaurentPoly::monomial(uniform(-5, 5), uniform(lo, hi));
    return p;
  }

  VirtualClass pure(long lo = -4, long hi = 4) { return VirtualClass::from_laurent(laurent(lo, hi)); }

  VirtualClass mixed(const std::vector<AtomPtr>& atoms) {
    VirtualClass v = pure();
    for (const auto& a : atoms)
      if (uniform(0, 1)) v += VirtualClass::atom(a) * pure(-3, 2);
    return v;
  }

  Series series(const FiniteField& F, unsigned n) {
    Series s(n + 1);
    for (auto& c : s) c = static_cast<FiniteField::value_type>(uniform(0, static_cast<long>(F.order()) - 1));
    return s;
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

/// [G_m]: the points of xy = 1, counted by enumeration.
inline AtomPtr torus_atom() {
  return make_atom("Gm", 1, [](const FiniteField& F) {
    auto X = AffineModel::hypersurfaces("torus", {"x", "y"}, {"x*y - 1"}, true);
    return count_points(X, F);
  });
}

}  // namespace motint::testing
