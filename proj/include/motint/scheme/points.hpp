#pragma once

#include "motint/polyalg/poly.hpp"

#include <functional>
#include <span>
#include <vector>

namespace motint {

using FieldPoint = std::vector<FiniteField::value_type>;

/// Integer polynomial reduced into F_q once, for repeated pointwise evaluation.
class FieldPoly {
 public:
  FieldPoly(const IntPoly& f, const FiniteField& field) : field_(field) {
    for (const auto& [m, c] : f.terms()) {
      auto v = field.from_integer(c);
      if (v != 0) terms_.push_back({m, v});
    }
  }

  FiniteField::value_type operator()(std::span<const FiniteField::value_type> pt) const {
    FiniteField::value_type acc = 0;
    for (const auto& t : terms_) {
      FiniteField::value_type v = t.coeff;
      for (std::size_t i = 0; i < t.exps.size() && v != 0; ++i)
        if (t.exps[i]) v = field_.mul(v, field_.pow(pt[i], t.exps[i]));
      acc = field_.add(acc, v);
    }
    return acc;
  }

 private:
  struct Term {
    Monomial exps;
    FiniteField::value_type coeff;
  };
  FiniteField field_;
  std::vector<Term> terms_;
};

/// Brute-force scan of F_q^n, calling `visit` on every common zero of `system`.
inline void for_each_field_point(std::span<const IntPoly> system, std::size_t nvars, const FiniteField& field,
                                 const std::function<void(const FieldPoint&)>& visit) {
  std::vector<FieldPoly> fs;
  for (const auto& f : system) fs.emplace_back(f, field);
  const auto q = static_cast<FiniteField::value_type>(field.order());
  FieldPoint pt(nvars, 0);
  while (true) {
    bool ok = true;
    for (const auto& f : fs)
      if (f(pt) != 0) {
        ok = false;
        break;
      }
    if (ok) visit(pt);
    std::size_t i = 0;
    while (i < nvars && ++pt[i] == q) pt[i++] = 0;
    if (i == nvars) break;
  }
}

inline Integer count_field_points(std::span<const IntPoly> system, std::size_t nvars, const FiniteField& field) {
  Integer n = 0;
  for_each_field_point(system, nvars, field, [&](const FieldPoint&) { ++n; });
  return n;
}

}  // namespace motint
