#pragma once

#include "motint/gring/virtual_class.hpp"
#include "motint/polyalg/jacobian.hpp"
#include "motint/scheme/points.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace motint {

class ModelError : public MathError {
 public:
  using MathError::MathError;
};

/// omega = twist-adjusted coeff * dx_{coords[0]} ^ ... ^ dx_{coords[d-1]};
/// `twist` n records omega = varpi^{-n} * omega~.
struct GaugeForm {
  IntPoly coeff{IntegerRing{}, {}};
  std::vector<std::string> coords;
  int twist = 0;
};

/// Affine chart of a formal R-scheme: integer equations in named variables,
/// interpreted over F_q[[t]] or Z_p on demand.
struct AffineModel {
  std::string name;
  std::vector<std::string> vars;
  std::vector<IntPoly> equations;
  int rel_dim = 0;
  bool complete_intersection = true;
  /// Generators of the Fitting ideal for models that are not complete intersections.
  std::vector<IntPoly> fitting;
  std::optional<GaugeForm> form;
  bool smooth = false;
  /// Residue characteristics over which no smoothness claim is made.
  std::vector<std::uint64_t> bad_primes;
  /// Class of the special fibre, when the author supplies it.
  std::optional<VirtualClass> special_fibre;
  /// Functions asserted to be units on the model (checked pointwise).
  std::vector<IntPoly> units;

  std::size_t ambient_dim() const { return vars.size(); }
  std::size_t codim() const { return equations.size(); }

  IntPoly parse(std::string_view text) const { return parse_int_poly(text, vars); }

  static AffineModel affine_space(std::string name, std::vector<std::string> vars) {
    AffineModel m;
    m.name = std::move(name);
    m.vars = std::move(vars);
    m.rel_dim = static_cast<int>(m.vars.size());
    m.smooth = true;
    m.special_fibre = VirtualClass::lefschetz(m.rel_dim);
    return m;
  }

  /// Complete-intersection model with d = N - #equations.
  static AffineModel hypersurfaces(std::string name, std::vector<std::string> vars,
                                   const std::vector<std::string>& eqs, bool smooth) {
    AffineModel m;
    m.name = std::move(name);
    m.vars = std::move(vars);
    for (const auto& e : eqs) m.equations.push_back(parse_int_poly(e, m.vars));
    m.rel_dim = static_cast<int>(m.vars.size() - m.equations.size());
    m.smooth = smooth;
    m.validate();
    return m;
  }

  void validate() const {
    if (rel_dim < 0 || static_cast<std::size_t>(rel_dim) > vars.size())
      throw ModelError(name + ": relative dimension " + std::to_string(rel_dim) + " outside [0, " +
                       std::to_string(vars.size()) + "]");
    if (complete_intersection && static_cast<std::size_t>(rel_dim) + equations.size() != vars.size())
      throw ModelError(name + ": complete intersection needs dim = #variables - #equations");
    for (const auto& f : equations)
      if (f.vars() != vars) throw ModelError(name + ": equation over a different variable list");
    if (form) {
      if (form->coords.size() != static_cast<std::size_t>(rel_dim))
        throw ModelError(name + ": gauge form needs exactly dim coordinates");
      for (const auto& c : form->coords)
        if (std::find(vars.begin(), vars.end(), c) == vars.end())
          throw ModelError(name + ": gauge form coordinate '" + c + "' is not a variable");
    }
  }

  bool claims_smooth_over(std::uint64_t p) const {
    return smooth && std::find(bad_primes.begin(), bad_primes.end(), p) == bad_primes.end();
  }
};

/// Equations of X together with generators of Fitt_d(Omega): the c x c
/// Jacobian minors for complete intersections, the declared generators
/// otherwise. The common zero set is the singular locus.
inline std::vector<IntPoly> singular_locus_equations(const AffineModel& X) {
  std::vector<IntPoly> out = X.equations;
  if (X.complete_intersection) {
    auto minors = jacobian_minors(X.equations, X.vars, X.codim());
    out.insert(out.end(), minors.begin(), minors.end());
    return out;
  }
  if (X.fitting.empty())
    throw ModelError(X.name + ": not a complete intersection and no Fitting-ideal generators declared");
  out.insert(out.end(), X.fitting.begin(), X.fitting.end());
  return out;
}

/// Generators whose non-vanishing certifies smoothness (minors or declared).
inline std::vector<IntPoly> smoothness_generators(const AffineModel& X) {
  if (X.complete_intersection) return jacobian_minors(X.equations, X.vars, X.codim());
  if (X.fitting.empty())
    throw ModelError(X.name + ": not a complete intersection and no Fitting-ideal generators declared");
  return X.fitting;
}

inline bool is_smooth_point(const AffineModel& X, const FieldPoint& pt, const FiniteField& field) {
  if (pt.size() != X.ambient_dim()) throw ModelError("point has the wrong number of coordinates");
  for (const auto& f : X.equations)
    if (FieldPoly(f, field)(pt) != 0) throw ModelError("point does not lie on " + X.name);
  for (const auto& g : smoothness_generators(X))
    if (FieldPoly(g, field)(pt) != 0) return true;
  return false;
}

/// Singular F_q-points of X (exhaustive).
inline std::vector<FieldPoint> singular_points(const AffineModel& X, const FiniteField& field) {
  std::vector<FieldPoint> out;
  auto sys = singular_locus_equations(X);
  for_each_field_point(sys, X.ambient_dim(), field, [&](const FieldPoint& p) { out.push_back(p); });
  return out;
}

/// Checks the author's smoothness claim over F_q; throws if it fails.
inline void verify_smooth(const AffineModel& X, const FiniteField& field) {
  if (!X.claims_smooth_over(field.characteristic()))
    throw ModelError(X.name + " is not declared smooth over " + field.describe());
  auto bad = singular_points(X, field);
  if (!bad.empty()) throw ModelError(X.name + " is declared smooth but has singular points over " + field.describe());
}

/// Checks declared units never vanish on X(F_q).
inline void verify_units(const AffineModel& X, const FiniteField& field) {
  for (const auto& u : X.units) {
    FieldPoly fu(u, field);
    for_each_field_point(X.equations, X.ambient_dim(), field, [&](const FieldPoint& p) {
      if (fu(p) == 0) throw ModelError(X.name + ": declared unit " + u.to_string() + " vanishes over " +
                                       field.describe());
    });
  }
}

/// |X(F_q)|.
inline Integer count_points(const AffineModel& X, const FiniteField& field) {
  return count_field_points(X.equations, X.ambient_dim(), field);
}

/// f(components), where components are polynomials over a common variable list.
inline IntPoly compose(const IntPoly& f, std::span<const IntPoly> components,
                       const std::vector<std::string>& new_vars) {
  if (components.size() != f.nvars()) throw MathError("compose: component count does not match variables");
  IntPoly acc(IntegerRing{}, new_vars);
  for (const auto& [m, c] : f.terms()) {
    IntPoly term = IntPoly::constant(IntegerRing{}, new_vars, c);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) term *= components[i].pow(m[i]);
    acc += term;
  }
  return acc;
}

/// Morphism of affine charts given by one polynomial per target variable.
struct ModelMorphism {
  std::string name;
  AffineModel source;
  AffineModel target;
  std::vector<IntPoly> components;
  /// Optional locus E on the source (equations), used by dimension-growth checks.
  std::vector<IntPoly> locus;

  void validate() const {
    if (components.size() != target.ambient_dim())
      throw ModelError(name + ": need one component per target variable");
    for (const auto& c : components)
      if (c.vars() != source.vars) throw ModelError(name + ": component over a different variable list");
  }

  /// Target equations pulled back to the source.
  std::vector<IntPoly> pulled_back_equations() const {
    std::vector<IntPoly> out;
    for (const auto& f : target.equations) out.push_back(compose(f, components, source.vars));
    return out;
  }

  static ModelMorphism identity(const AffineModel& X) {
    ModelMorphism h{X.name + "-identity", X, X, {}, {}};
    for (std::size_t i = 0; i < X.ambient_dim(); ++i)
      h.components.push_back(IntPoly::variable(IntegerRing{}, X.vars, i));
    return h;
  }
};

/// Checks that h maps X_source(F_q) into X_target.
inline void verify_morphism(const ModelMorphism& h, const FiniteField& field) {
  h.validate();
  auto pulled = h.pulled_back_equations();
  std::vector<FieldPoly> fs;
  for (const auto& f : pulled) fs.emplace_back(f, field);
  for_each_field_point(h.source.equations, h.source.ambient_dim(), field, [&](const FieldPoint& p) {
    for (const auto& f : fs)
      if (f(p) != 0) throw ModelError(h.name + ": image of a source point leaves the target over " + field.describe());
  });
}

/// Finite cover of one chart by principal opens D(g_1 ... g_k); the overlap of
/// a family of pieces inverts the union of their generators.
struct CoverPresentation {
  std::string name;
  AffineModel model;
  std::vector<std::vector<IntPoly>> pieces;

  std::vector<IntPoly> overlap(const std::vector<std::size_t>& which) const {
    std::vector<IntPoly> gens;
    for (auto i : which) gens.insert(gens.end(), pieces.at(i).begin(), pieces.at(i).end());
    return gens;
  }
};

/// Every F_q-point of the model must lie in some piece.
inline void verify_cover(const CoverPresentation& cover, const FiniteField& field) {
  std::vector<std::vector<FieldPoly>> pieces;
  for (const auto& piece : cover.pieces) {
    pieces.emplace_back();
    for (const auto& g : piece) pieces.back().emplace_back(g, field);
  }
  for_each_field_point(cover.model.equations, cover.model.ambient_dim(), field, [&](const FieldPoint& p) {
    for (const auto& piece : pieces)
      if (std::all_of(piece.begin(), piece.end(), [&](const FieldPoly& g) { return g(p) != 0; })) return;
    throw ModelError(cover.name + ": pieces do not cover the model over " + field.describe());
  });
}

/// X x X' on the disjoint union of the variable lists; clashing names of the
/// second factor get a "_2" suffix.
inline AffineModel product_model(const AffineModel& X, const AffineModel& Y) {
  std::vector<std::string> yvars = Y.vars;
  for (auto& v : yvars)
    while (std::find(X.vars.begin(), X.vars.end(), v) != X.vars.end()) v += "_2";
  std::vector<std::string> all = X.vars;
  all.insert(all.end(), yvars.begin(), yvars.end());
  auto lift_y = [&](const IntPoly& f) {
    IntPoly renamed(IntegerRing{}, yvars);
    for (const auto& [m, c] : f.terms()) renamed.add_term(m, c);
    return renamed.with_vars(all);
  };
  AffineModel P;
  P.name = X.name + "x" + Y.name;
  P.vars = all;
  for (const auto& f : X.equations) P.equations.push_back(f.with_vars(all));
  for (const auto& f : Y.equations) P.equations.push_back(lift_y(f));
  P.rel_dim = X.rel_dim + Y.rel_dim;
  P.complete_intersection = X.complete_intersection && Y.complete_intersection;
  if (!P.complete_intersection) throw ModelError("product of non-complete-intersection models is not supported");
  P.smooth = X.smooth && Y.smooth;
  P.bad_primes = X.bad_primes;
  P.bad_primes.insert(P.bad_primes.end(), Y.bad_primes.begin(), Y.bad_primes.end());
  if (X.special_fibre && Y.special_fibre) P.special_fibre = *X.special_fibre * *Y.special_fibre;
  for (const auto& u : X.units) P.units.push_back(u.with_vars(all));
  for (const auto& u : Y.units) P.units.push_back(lift_y(u));
  P.validate();
  return P;
}

/// Helper for moving a polynomial of Y into the product's variable list.
inline IntPoly lift_second_factor(const IntPoly& f, const AffineModel& X, const AffineModel& product) {
  std::vector<std::string> yvars(product.vars.begin() + static_cast<long>(X.vars.size()), product.vars.end());
  IntPoly renamed(IntegerRing{}, yvars);
  for (const auto& [m, c] : f.terms()) renamed.add_term(m, c);
  return renamed.with_vars(product.vars);
}

}  // namespace motint
