#pragma once

#include "motint/gring/completed.hpp"
#include "motint/measure/cylinder.hpp"

#include <map>
#include <set>

namespace motint {

/// Jet counts at one level split by ord f: by_order[k] for k <= level, and
/// `beyond` for ord f >= level + 1.
struct StratumCounts {
  unsigned level = 0;
  std::vector<Integer> by_order;
  Integer beyond = 0;

  Integer total() const {
    Integer t = beyond;
    for (const auto& c : by_order) t += c;
    return t;
  }
  bool operator==(const StratumCounts&) const = default;
};

inline StratumCounts stratum_counts(const AffineModel& X, const IntPoly& f, const Condition& domain,
                                    const FiniteField& field, unsigned level, JetMode mode = JetMode::Series,
                                    EnumOptions opts = {}) {
  domain.check_level(level);
  StratumCounts s;
  s.level = level;
  s.by_order.assign(level + 1, 0);
  JetEnumerator en(X, mode, field, level, opts);
  ConditionEvaluator cond(domain, field);
  JetPoly fj(f, field);
  en.for_each([&](const JetPoint& j) {
    if (!cond(j)) return;
    auto o = order_of_digits(evaluate_on_jet(fj, j));
    if (o.at_least)
      ++s.beyond;
    else
      ++s.by_order[static_cast<std::size_t>(o.value)];
  });
  return s;
}

/// Numeric value of an integral of L^{-ord f}: the partial sum over the
/// strata seen at `level`, and an upper bound for what is left.
struct CountIntegral {
  unsigned level = 0;
  Rational partial = 0;
  Rational tail_bound = 0;
  bool exact = false;
  StratumCounts strata;

  std::string to_string() const {
    if (exact) return motint::to_string(partial);
    return motint::to_string(partial) + " (tail <= " + motint::to_string(tail_bound) + ")";
  }
};

inline CountIntegral count_integral_from(const StratumCounts& s, const Integer& q, int d) {
  CountIntegral r;
  r.level = s.level;
  r.strata = s;
  const long base = -static_cast<long>(s.level + 1) * d;
  for (std::size_t k = 0; k < s.by_order.size(); ++k)
    r.partial += Rational(s.by_order[k]) * qpow(q, base - static_cast<long>(k));
  r.tail_bound = Rational(s.beyond) * qpow(q, base - static_cast<long>(s.level + 1));
  r.exact = s.beyond == 0;
  return r;
}

struct IntegralOptions {
  unsigned cutoff = 3;
  /// Author's claim that f is a unit on the generic fibre.
  bool unit = false;
  Condition domain = Condition::always();
  JetMode mode = JetMode::Series;
  EnumOptions enumeration;
};

inline void require_smooth(const AffineModel& X) {
  if (!X.smooth) throw ModelError("integrals need a smooth model; " + X.name + " is not declared smooth");
}

/// int_{domain} L^{-ord f} dmu~ specialized at q. With the unit flag the
/// levels 0..cutoff are tried in turn and the first with no jet of order
/// beyond the level gives the exact value.
inline CountIntegral integral_count(const AffineModel& X, const IntPoly& f, const FiniteField& field,
                                    const IntegralOptions& opt = {}) {
  require_smooth(X);
  verify_smooth(X, field);
  verify_units(X, field);
  const Integer q(field.order());
  unsigned first = opt.unit ? static_cast<unsigned>(std::max(0L, opt.domain.required_level())) : opt.cutoff;
  first = std::min(first, opt.cutoff);
  CountIntegral r;
  for (unsigned n = first; n <= opt.cutoff; ++n) {
    r = count_integral_from(stratum_counts(X, f, opt.domain, field, n, opt.mode, opt.enumeration), q, X.rel_dim);
    if (r.exact) break;
  }
  return r;
}

/// Symbolic counterpart; exact when the stratum ord f >= level + 1 is empty,
/// otherwise the partial sum up to the cutoff with tail level cutoff + 1.
inline CompletedClass integral_symbolic(const AffineModel& X, const IntPoly& f, const IntegralOptions& opt = {}) {
  require_smooth(X);
  unsigned first = opt.unit ? static_cast<unsigned>(std::max(0L, opt.domain.required_level())) : opt.cutoff;
  first = std::min(first, opt.cutoff);
  CompletedClass out;
  for (unsigned n = first; n <= opt.cutoff; ++n) {
    auto stratum = [&](Condition c) {
      CylinderSpec A{X, n, opt.domain && std::move(c), Stability::smooth()};
      auto cls = symbolic_cylinder_class(A);
      if (!cls) throw MathError("no symbolic class for " + A.condition.to_string() + " on " + X.name);
      return *cls;
    };
    const long base = -static_cast<long>(n + 1) * X.rel_dim;
    VirtualClass partial;
    for (unsigned k = 0; k <= n; ++k)
      partial += stratum(Condition::ord_eq(f, k)) * VirtualClass::lefschetz(base - static_cast<long>(k));
    bool empty_tail = stratum(Condition::ord_ge(f, n + 1)).is_zero();
    out = empty_tail ? CompletedClass::exact(partial) : CompletedClass{partial, static_cast<long>(n) + 1};
    if (empty_tail) break;
  }
  return out;
}

/// One component U_0^i of the special fibre of a weak Neron model, with ord_{U_0^i}(omega).
struct NeronComponent {
  VirtualClass cls;
  long ord = 0;
};

struct WeakNeronPresentation {
  std::string name;
  int rel_dim = 0;
  std::vector<NeronComponent> components;

  void validate() const {
    for (const auto& c : components) {
      auto vd = c.cls.virtual_dim();
      if (vd && *vd > rel_dim)
        throw ModelError(name + ": component class " + c.cls.to_string() + " has dimension above " +
                         std::to_string(rel_dim));
    }
  }

  VirtualClass total_class() const {
    VirtualClass t;
    for (const auto& c : components) t += c.cls;
    return t;
  }
};

/// L^{-d} sum_i [U_0^i] L^{-ord_i}.
inline VirtualClass neron_integral(const WeakNeronPresentation& P) {
  P.validate();
  VirtualClass s;
  for (const auto& c : P.components) s += c.cls * VirtualClass::lefschetz(-c.ord);
  return s * VirtualClass::lefschetz(-P.rel_dim);
}

/// lambda = [U_0] in K_0 / (L - 1).
inline VirtualClass serre_invariant(const WeakNeronPresentation& P) {
  P.validate();
  return P.total_class().mod_L_minus_1();
}

/// The counting specialization of the Serre invariant, in Z/(q - 1).
inline Integer serre_residue(const WeakNeronPresentation& P, const FiniteField& field) {
  return residue_mod_q_minus_1(P.total_class().specialize_count(field), Integer(field.order()));
}

/// sum_i [U_0^i] L^{alpha - ord_i} with alpha = min ord_i.
inline VirtualClass calabi_yau_class(const WeakNeronPresentation& P) {
  P.validate();
  if (P.components.empty()) throw MathError("Calabi-Yau class of an empty presentation");
  long alpha = P.components[0].ord;
  for (const auto& c : P.components) alpha = std::min(alpha, c.ord);
  VirtualClass s;
  for (const auto& c : P.components) s += c.cls * VirtualClass::lefschetz(alpha - c.ord);
  return s;
}

/// Two sides of an identity, numerically and (when a symbolic class is
/// available for every term) in the Grothendieck ring.
struct Comparison {
  Rational lhs = 0;
  Rational rhs = 0;
  std::optional<CompletedClass> lhs_class;
  std::optional<CompletedClass> rhs_class;
  bool equal = false;
  std::vector<std::string> notes;
};

inline std::vector<std::vector<std::size_t>> nonempty_subsets(std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t r = 1; r <= k; ++r)
    for (auto& c : combinations(k, r)) out.push_back(std::move(c));
  return out;
}

/// Domain condition for the overlap of a family of pieces: every inverted
/// generator has order 0.
inline Condition localization_condition(const CoverPresentation& cover, const std::vector<std::size_t>& which) {
  std::vector<Condition> parts;
  for (auto& g : cover.overlap(which)) parts.push_back(Condition::ord_eq(g, 0));
  return Condition::all_of(std::move(parts));
}

/// Integral over the whole chart against the alternating sum over overlaps
/// of the pieces, compared stratum by stratum.
inline Comparison additivity_check(const CoverPresentation& cover, const IntPoly& f, const FiniteField& field,
                                   const IntegralOptions& opt = {}) {
  const auto& X = cover.model;
  require_smooth(X);
  verify_smooth(X, field);
  verify_cover(cover, field);
  const Integer q(field.order());
  const unsigned n = opt.cutoff;
  auto total = stratum_counts(X, f, opt.domain, field, n, opt.mode, opt.enumeration);
  StratumCounts alt;
  alt.level = n;
  alt.by_order.assign(n + 1, 0);
  std::optional<VirtualClass> rhs_cls = VirtualClass::zero();
  for (const auto& I : nonempty_subsets(cover.pieces.size())) {
    Condition dom = opt.domain && localization_condition(cover, I);
    auto s = stratum_counts(X, f, dom, field, n, opt.mode, opt.enumeration);
    const int sign = I.size() % 2 ? 1 : -1;
    for (std::size_t k = 0; k <= n; ++k) alt.by_order[k] += sign * s.by_order[k];
    alt.beyond += sign * s.beyond;
    if (rhs_cls) {
      try {
        IntegralOptions o = opt;
        o.domain = dom;
        auto c = integral_symbolic(X, f, o);
        if (!c.is_exact()) c = {c.partial, c.tail_level};
        *rhs_cls += sign == 1 ? c.partial : -c.partial;
      } catch (const MathError&) {
        rhs_cls.reset();
      }
    }
  }
  Comparison out;
  auto l = count_integral_from(total, q, X.rel_dim);
  auto r = count_integral_from(alt, q, X.rel_dim);
  out.lhs = l.partial;
  out.rhs = r.partial;
  out.equal = total == alt;
  if (!out.equal) out.notes.push_back("stratum counts differ");
  try {
    auto lc = integral_symbolic(X, f, opt);
    if (rhs_cls) {
      out.lhs_class = lc;
      out.rhs_class = CompletedClass{*rhs_cls, lc.tail_level};
      out.equal = out.equal && lc.partial == *rhs_cls;
    }
  } catch (const MathError&) {
  }
  return out;
}

/// Integral on X x X' of f f' against the product of the two integrals; the
/// level-n strata of the product are the convolution of the factors' strata.
inline Comparison product_check(const AffineModel& X, const AffineModel& Y, const IntPoly& f, const IntPoly& g,
                                const FiniteField& field, const IntegralOptions& opt = {}) {
  require_smooth(X);
  require_smooth(Y);
  auto P = product_model(X, Y);
  IntPoly F = f.with_vars(P.vars) * lift_second_factor(g, X, P);
  const Integer q(field.order());
  const unsigned n = opt.cutoff;
  auto sp = stratum_counts(P, F, Condition::always(), field, n, opt.mode, opt.enumeration);
  auto sx = stratum_counts(X, f, Condition::always(), field, n, opt.mode, opt.enumeration);
  auto sy = stratum_counts(Y, g, Condition::always(), field, n, opt.mode, opt.enumeration);
  StratumCounts conv;
  conv.level = n;
  conv.by_order.assign(n + 1, 0);
  for (std::size_t a = 0; a <= n; ++a)
    for (std::size_t b = 0; a + b <= n; ++b) conv.by_order[a + b] += sx.by_order[a] * sy.by_order[b];
  conv.beyond = sx.total() * sy.total();
  for (const auto& c : conv.by_order) conv.beyond -= c;
  Comparison out;
  auto l = count_integral_from(sp, q, P.rel_dim);
  auto r = count_integral_from(conv, q, P.rel_dim);
  out.lhs = l.partial;
  out.rhs = r.partial;
  out.equal = sp == conv;
  if (!out.equal) out.notes.push_back("product strata differ from the convolution of the factors");
  auto lx = count_integral_from(sx, q, X.rel_dim), ly = count_integral_from(sy, q, Y.rel_dim);
  if (l.exact && lx.exact && ly.exact && l.partial != lx.partial * ly.partial) {
    out.equal = false;
    out.notes.push_back("exact values differ");
  }
  try {
    IntegralOptions o = opt;
    o.domain = Condition::always();
    auto lc = integral_symbolic(P, F, o);
    auto rc = integral_symbolic(X, f, o) * integral_symbolic(Y, g, o);
    out.lhs_class = lc;
    out.rhs_class = rc;
    out.equal = out.equal && lc.agrees_with(rc);
  } catch (const MathError&) {
  }
  return out;
}

struct ChangeOfVariables {
  Rational lhs = 0;
  Rational rhs = 0;
  std::optional<VirtualClass> lhs_class;
  std::optional<VirtualClass> rhs_class;
  Integer source_jets = 0;
  Integer image_jets = 0;
  Integer image_jets_next = 0;
  std::map<long, Integer> jacobian_strata;
  bool fibres_ok = true;
  bool injective = true;
  bool stable = true;
  bool image_matches_a = true;
  bool equal = false;
  std::vector<std::string> notes;

  bool verdict() const { return equal && fibres_ok && injective && stable && image_matches_a; }
};

namespace detail {

struct ImageData {
  std::map<std::vector<Series>, std::vector<std::pair<long, JetPoint>>> fibres;
  std::map<long, Integer> strata;
  Integer source = 0;
};

inline ImageData map_cylinder(const ModelMorphism& h, const Condition& B, const FiniteField& field, unsigned n,
                              JetMode mode, const EnumOptions& opts) {
  ImageData out;
  std::vector<JetPoly> comps, gens;
  for (const auto& c : h.components) comps.emplace_back(c, field);
  for (const auto& g : jacobian_ideal_generators(h)) gens.emplace_back(g, field);
  ConditionEvaluator cond(B, field);
  JetEnumerator en(h.source, mode, field, n, opts);
  en.for_each([&](const JetPoint& j) {
    if (!cond(j)) return;
    auto e = minor_order(gens, j);
    if (e.at_least)
      throw MathError("ord Jac of " + h.name + " exceeds level " + std::to_string(n) + " at " + j.to_string() +
                      "; raise the level");
    std::vector<Series> image;
    for (const auto& c : comps) image.push_back(evaluate_on_jet(c, j));
    out.fibres[image].push_back({e.value, j});
    ++out.strata[e.value];
    ++out.source;
  });
  return out;
}

inline Condition jacobian_order_condition(const ModelMorphism& h, long e) {
  std::vector<Condition> ge, eq;
  for (const auto& g : jacobian_ideal_generators(h)) {
    ge.push_back(Condition::ord_ge(g, e));
    eq.push_back(Condition::ord_eq(g, e));
  }
  return Condition::all_of(std::move(ge)) && Condition::any_of(std::move(eq));
}

}  // namespace detail

/// int_{h(B)} dmu~ against int_B L^{-ord Jac_h} dmu~ at level n: the image
/// is counted directly, fibres are checked to be affine spaces of dimension
/// e, injectivity modulo t^{n-e+1}, and stability of the image one level up.
inline ChangeOfVariables change_of_variables_check(const ModelMorphism& h, const Condition& B, unsigned n,
                                                   const FiniteField& field,
                                                   const std::optional<Condition>& A = std::nullopt,
                                                   JetMode mode = JetMode::Series, EnumOptions opts = {}) {
  h.validate();
  const auto& Y = h.source;
  const auto& X = h.target;
  require_smooth(Y);
  verify_smooth(Y, field);
  verify_morphism(h, field);
  if (X.rel_dim != Y.rel_dim) throw ModelError(h.name + ": source and target dimensions differ");
  B.check_level(n);
  const Integer q(field.order());
  const int d = Y.rel_dim;
  ChangeOfVariables r;
  auto data = detail::map_cylinder(h, B, field, n, mode, opts);
  r.source_jets = data.source;
  r.image_jets = Integer(data.fibres.size());
  r.jacobian_strata = data.strata;
  for (const auto& [image, fibre] : data.fibres) {
    const long e = fibre.front().first;
    for (const auto& [ei, j] : fibre)
      if (ei != e) {
        r.fibres_ok = false;
        r.notes.push_back("fibre mixes Jacobian orders");
        break;
      }
    if (Integer(fibre.size()) != ipow(q, static_cast<unsigned long>(e))) {
      r.fibres_ok = false;
      r.notes.push_back("fibre of size " + std::to_string(fibre.size()) + " where q^" + std::to_string(e) +
                        " was expected");
    }
    if (e > static_cast<long>(n)) continue;
    auto base = truncate(fibre.front().second, static_cast<unsigned>(n - e));
    for (const auto& [ei, j] : fibre)
      if (!(truncate(j, static_cast<unsigned>(n - e)) == base)) {
        r.injective = false;
        r.notes.push_back("two jets of B with the same image differ modulo t^" + std::to_string(n - e + 1));
        break;
      }
  }
  auto next = detail::map_cylinder(h, B, field, n + 1, mode, opts);
  r.image_jets_next = Integer(next.fibres.size());
  r.stable = r.image_jets_next == r.image_jets * ipow(q, static_cast<unsigned long>(d));
  if (!r.stable) r.notes.push_back("image is not stable at level " + std::to_string(n));
  const long base = -static_cast<long>(n + 1) * d;
  r.lhs = Rational(r.image_jets) * qpow(q, base);
  for (const auto& [e, c] : r.jacobian_strata) r.rhs += Rational(c) * qpow(q, base - e);
  r.equal = r.lhs == r.rhs;
  if (A) {
    A->check_level(n);
    ConditionEvaluator acond(*A, field);
    JetEnumerator en(X, mode, field, n, opts);
    Integer in_a = 0;
    en.for_each([&](const JetPoint& j) {
      if (!acond(j)) return;
      ++in_a;
      if (!data.fibres.count(j.digits)) r.image_matches_a = false;
    });
    if (in_a != r.image_jets) r.image_matches_a = false;
    if (!r.image_matches_a) r.notes.push_back("h(B) differs from the stated A at level " + std::to_string(n));
    if (auto cls = symbolic_cylinder_class(CylinderSpec{X, n, *A, Stability::smooth()}))
      r.lhs_class = *cls * VirtualClass::lefschetz(base);
  }
  std::optional<VirtualClass> rhs = VirtualClass::zero();
  for (const auto& [e, c] : r.jacobian_strata) {
    auto cls = symbolic_cylinder_class(CylinderSpec{Y, n, B && detail::jacobian_order_condition(h, e),
                                                    Stability::smooth()});
    if (!cls) {
      rhs.reset();
      break;
    }
    *rhs += *cls * VirtualClass::lefschetz(base - e);
  }
  if (rhs) r.rhs_class = rhs;
  if (r.lhs_class && r.rhs_class) {
    r.equal = r.equal && *r.lhs_class == *r.rhs_class;
    if (r.lhs_class->specialize_count(field) != r.lhs || r.rhs_class->specialize_count(field) != r.rhs) {
      r.equal = false;
      r.notes.push_back("symbolic sides do not specialize to the counts");
    }
  }
  return r;
}

}  // namespace motint
