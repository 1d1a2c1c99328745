#pragma once

#include "motint/measure/integral.hpp"

namespace motint {

/// Z_p when q is prime, F_q[[t]] otherwise (unramified Witt lifts of F_q
/// are not realized).
inline JetMode local_ring_mode(const FiniteField& field) {
  return field.degree() == 1 ? JetMode::Mixed : JetMode::Series;
}

struct PadicVolume {
  Rational value = 0;
  unsigned level = 0;
};

/// |C(F_q)| q^{-d(n+1)} for a cylinder over a smooth model.
inline PadicVolume cylinder_volume(const CylinderSpec& A, const FiniteField& field, EnumOptions opts = {}) {
  require_smooth(A.model);
  return {cylinder_measure_count(A, field, local_ring_mode(field), std::move(opts)), A.level};
}

struct PadicIntegral {
  Rational partial = 0;
  Rational tail_bound = 0;
  unsigned cutoff = 0;
  bool exact = false;
};

/// sum_{n <= M} q^{-n} vol(ord f = n), and vol(ord f >= M+1) q^{-(M+1)},
/// with each stratum volume computed as a cylinder volume of level n.
inline PadicIntegral padic_integral(const AffineModel& X, const IntPoly& f, const FiniteField& field, unsigned cutoff,
                                    EnumOptions opts = {}) {
  require_smooth(X);
  const Integer q(field.order());
  PadicIntegral r;
  r.cutoff = cutoff;
  for (unsigned n = 0; n <= cutoff; ++n) {
    CylinderSpec stratum{X, n, Condition::ord_eq(f, n), Stability::smooth()};
    r.partial += cylinder_volume(stratum, field, opts).value * qpow(q, -static_cast<long>(n));
  }
  CylinderSpec rest{X, cutoff, Condition::ord_ge(f, cutoff + 1), Stability::smooth()};
  r.tail_bound = cylinder_volume(rest, field, opts).value * qpow(q, -static_cast<long>(cutoff + 1));
  r.exact = r.tail_bound == 0;
  return r;
}

struct MotivicComparison {
  Rational motivic_partial = 0;
  Rational motivic_tail = 0;
  Rational padic_partial = 0;
  Rational padic_tail = 0;
  bool symbolic = false;
  std::optional<CompletedClass> motivic_class;

  bool agree() const { return motivic_partial == padic_partial && motivic_tail == padic_tail; }
};

/// N(int L^{-ord f} dmu~) against the p-adic integral, stratum by stratum:
/// the motivic side is symbolic when the built-in provider applies, and a
/// series-mode count otherwise.
inline MotivicComparison compare_motivic(const AffineModel& X, const IntPoly& f, const FiniteField& field,
                                         unsigned cutoff, EnumOptions opts = {}) {
  require_smooth(X);
  verify_smooth(X, field);
  MotivicComparison r;
  auto p = padic_integral(X, f, field, cutoff, opts);
  r.padic_partial = p.partial;
  r.padic_tail = p.tail_bound;
  const Integer q(field.order());
  const long base = -static_cast<long>(cutoff + 1) * X.rel_dim;
  try {
    VirtualClass partial;
    for (unsigned k = 0; k <= cutoff; ++k) {
      auto cls = symbolic_cylinder_class({X, cutoff, Condition::ord_eq(f, k), Stability::smooth()});
      if (!cls) throw MathError("no symbolic stratum");
      partial += *cls * VirtualClass::lefschetz(base - static_cast<long>(k));
    }
    auto tail = symbolic_cylinder_class({X, cutoff, Condition::ord_ge(f, cutoff + 1), Stability::smooth()});
    if (!tail) throw MathError("no symbolic stratum");
    auto tail_class = *tail * VirtualClass::lefschetz(base - static_cast<long>(cutoff + 1));
    r.motivic_class = tail->is_zero() ? CompletedClass::exact(partial)
                                      : CompletedClass{partial, static_cast<long>(cutoff) + 1};
    r.motivic_partial = partial.specialize_count(field);
    r.motivic_tail = tail_class.specialize_count(field);
    r.symbolic = true;
    return r;
  } catch (const MathError&) {
  }
  IntegralOptions o;
  o.cutoff = cutoff;
  o.enumeration = opts;
  auto c = integral_count(X, f, field, o);
  r.motivic_partial = c.partial;
  r.motivic_tail = c.tail_bound;
  return r;
}

}  // namespace motint
