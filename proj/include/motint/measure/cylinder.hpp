#pragma once

#include "motint/greenberg/lift.hpp"
#include "motint/measure/condition.hpp"

namespace motint {

class Inconclusive : public MathError {
 public:
  using MathError::MathError;
};

/// Why a cylinder may be measured at its level.
struct Stability {
  enum class Kind { SmoothModel, InsideGrE, Declared };
  Kind kind = Kind::SmoothModel;
  unsigned e = 0;

  static Stability smooth() { return {}; }
  static Stability inside(unsigned e) { return {Kind::InsideGrE, e}; }
  static Stability declared() { return {Kind::Declared, 0}; }

  std::string to_string() const {
    switch (kind) {
      case Kind::SmoothModel:
        return "smooth model";
      case Kind::InsideGrE:
        return "inside Gr^(" + std::to_string(e) + ")";
      case Kind::Declared:
        break;
    }
    return "declared";
  }
};

/// A = pi_n^{-1}(C) with C = {j in Gr_n(X) : condition(j)}.
struct CylinderSpec {
  AffineModel model;
  unsigned level = 0;
  Condition condition;
  Stability stability;

  void validate() const {
    condition.check_level(level);
    if (stability.kind == Stability::Kind::SmoothModel && !model.smooth)
      throw ModelError("cylinder on " + model.name + " tagged smooth-model, but the model is not declared smooth");
    if (stability.kind == Stability::Kind::InsideGrE && level < 2 * stability.e)
      throw MathError("a cylinder inside Gr^(" + std::to_string(stability.e) + ") is only stable from level " +
                      std::to_string(2 * stability.e));
  }
};

/// |pi_n(A)(F_q)|, honouring the stability tag.
inline Integer cylinder_jet_count(const CylinderSpec& A, const FiniteField& field, JetMode mode = JetMode::Series,
                                  EnumOptions opts = {}, unsigned depth = 0) {
  A.validate();
  if (A.stability.kind == Stability::Kind::SmoothModel) verify_smooth(A.model, field);
  JetEnumerator en(A.model, mode, field, A.level, opts);
  ConditionEvaluator cond(A.condition, field);
  Integer n = 0;
  if (A.stability.kind != Stability::Kind::InsideGrE) {
    en.for_each([&](const JetPoint& j) {
      if (cond(j)) ++n;
    });
    return n;
  }
  if (!A.model.complete_intersection) throw ModelError("Gr^(e) membership needs a complete-intersection model");
  std::vector<JetPoly> minors;
  for (const auto& g : smoothness_generators(A.model)) minors.emplace_back(g, field);
  const unsigned e = A.stability.e;
  en.for_each([&](const JetPoint& j) {
    if (!cond(j)) return;
    auto o = minor_order(minors, j);
    bool inside = !o.at_least && o.value <= static_cast<long>(e);
    auto v = lift_jet(A.model, j, inside ? std::max(depth, e) : depth, opts);
    if (v.kind == LiftVerdict::Kind::Unknown)
      throw Inconclusive("lifting " + j.to_string() + " is undecided at depth " + std::to_string(v.level));
    if (v.kind == LiftVerdict::Kind::No) return;
    if (!inside) throw MathError("cylinder is not contained in Gr^(" + std::to_string(e) + "): " + j.to_string());
    ++n;
  });
  return n;
}

/// mu~(A) = |pi_n(A)(F_q)| q^{-(n+1)d}.
inline Rational cylinder_measure_count(const CylinderSpec& A, const FiniteField& field,
                                       JetMode mode = JetMode::Series, EnumOptions opts = {}, unsigned depth = 0) {
  return Rational(cylinder_jet_count(A, field, mode, opts, depth)) *
         qpow(Integer(field.order()), -static_cast<long>(A.level + 1) * A.model.rel_dim);
}

namespace detail {

/// +-1 times a monomial in variables declared to be units, or a declared unit.
inline bool is_unit_poly(const AffineModel& X, const IntPoly& f) {
  for (const auto& u : X.units)
    if (f == u || f == -u) return true;
  if (f.terms().size() != 1) return false;
  const auto& [m, c] = *f.terms().begin();
  if (c != 1 && c != -1) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    auto xi = IntPoly::variable(IntegerRing{}, X.vars, i);
    bool unit = false;
    for (const auto& u : X.units)
      if (u == xi || u == -xi) unit = true;
    if (!unit) return false;
  }
  return true;
}

/// Folds constraints on unit polynomials (order 0 on every arc) to constants.
inline Condition fold_units(const AffineModel& X, const Condition& c) {
  using K = Condition::Kind;
  switch (c.kind) {
    case K::Vanish:
    case K::NonVanish:
    case K::OrdEq:
    case K::OrdGe: {
      if (!is_unit_poly(X, *c.poly)) return c;
      Order zero{0, false};
      return c.holds([&](const IntPoly&) { return zero; }) ? Condition::always() : Condition::never();
    }
    case K::Not: {
      auto inner = fold_units(X, c.children[0]);
      if (inner.kind == K::True) return Condition::never();
      if (inner.kind == K::False) return Condition::always();
      return Condition::negate(std::move(inner));
    }
    case K::And:
    case K::Or: {
      std::vector<Condition> kept;
      for (const auto& child : c.children) {
        auto f = fold_units(X, child);
        if (c.kind == K::And && f.kind == K::False) return Condition::never();
        if (c.kind == K::Or && f.kind == K::True) return Condition::always();
        if (f.kind == K::True || f.kind == K::False) continue;
        kept.push_back(std::move(f));
      }
      return c.kind == K::And ? Condition::all_of(std::move(kept)) : Condition::any_of(std::move(kept));
    }
    default:
      return c;
  }
}

/// Class of {a in A^N(k[t]/t^{n+1}) : condition} when every polynomial is
/// +-1 times a monomial: stratify by the order of each coordinate.
inline std::optional<VirtualClass> monomial_condition_class(const AffineModel& X, const Condition& c,
                                                            unsigned n) {
  std::vector<IntPoly> polys;
  c.collect(polys);
  std::vector<bool> used(X.ambient_dim(), false);
  for (const auto& f : polys) {
    if (f.is_zero()) continue;
    if (f.terms().size() != 1) return std::nullopt;
    const auto& [m, coeff] = *f.terms().begin();
    if (coeff != 1 && coeff != -1) return std::nullopt;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) used[i] = true;
  }
  std::vector<std::size_t> vs;
  for (std::size_t i = 0; i < used.size(); ++i)
    if (used[i]) vs.push_back(i);
  const long top = static_cast<long>(n) + 1;
  auto L = VirtualClass::lefschetz(1);
  VirtualClass total;
  std::vector<long> ords(X.ambient_dim(), 0);
  std::vector<long> k(vs.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < vs.size(); ++i) ords[vs[i]] = k[i];
    auto order_of = [&](const IntPoly& f) -> Order {
      if (f.is_zero()) return {top, true};
      const auto& m = f.terms().begin()->first;
      long s = 0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (ords[i] == top) return {top, true};
        s += static_cast<long>(m[i]) * ords[i];
      }
      return s >= top ? Order{top, true} : Order{s, false};
    };
    if (c.holds(order_of)) {
      VirtualClass cell = VirtualClass::one();
      for (auto ki : k)
        if (ki < top) cell *= (L - VirtualClass::one()) * VirtualClass::lefschetz(static_cast<long>(n) - ki);
      total += cell;
    }
    std::size_t i = 0;
    while (i < k.size() && ++k[i] > top) k[i++] = 0;
    if (i == k.size()) break;
  }
  return total * VirtualClass::lefschetz(static_cast<long>((n + 1) * (X.ambient_dim() - vs.size())));
}

}  // namespace detail

/// Built-in symbolic [pi_n(A)] for smooth cylinders whose condition only
/// involves declared units, or +-monomials on an equation-free model, or is
/// trivially true on a model with a declared special-fibre class.
inline std::optional<VirtualClass> symbolic_cylinder_class(const CylinderSpec& A) {
  A.validate();
  if (A.stability.kind != Stability::Kind::SmoothModel) return std::nullopt;
  const auto& X = A.model;
  auto c = detail::fold_units(X, A.condition);
  if (c.kind == Condition::Kind::False) return VirtualClass::zero();
  if (c.kind == Condition::Kind::True) {
    if (X.special_fibre)
      return *X.special_fibre * VirtualClass::lefschetz(static_cast<long>(A.level) * X.rel_dim);
    if (X.equations.empty()) return VirtualClass::lefschetz(static_cast<long>((A.level + 1) * X.ambient_dim()));
    return std::nullopt;
  }
  if (X.equations.empty()) return detail::monomial_condition_class(X, c, A.level);
  return std::nullopt;
}

/// mu~(A) = [pi_n(A)] L^{-(n+1)d}; `supplied` overrides the built-in provider.
inline VirtualClass cylinder_measure_symbolic(const CylinderSpec& A,
                                              const std::optional<VirtualClass>& supplied = std::nullopt) {
  A.validate();
  auto cls = supplied ? supplied : symbolic_cylinder_class(A);
  if (!cls)
    throw MathError("no symbolic class for the cylinder " + A.condition.to_string() + " on " + A.model.name +
                    "; supply one");
  return *cls * VirtualClass::lefschetz(-static_cast<long>(A.level + 1) * A.model.rel_dim);
}

}  // namespace motint
