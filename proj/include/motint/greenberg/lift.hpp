#pragma once

#include "motint/greenberg/enumerate.hpp"

#include <variant>

namespace motint {

/// Newton data: a lift to `level` whose smallest Jacobian-minor order is `minor_order`,
/// with level >= 2e, so an arc agreeing with it through level - e exists.
struct HenselCertificate {
  unsigned level = 0;
  unsigned minor_order = 0;
  JetPoint lift;
  bool exact_arc = false;
};

struct LiftVerdict {
  enum class Kind { Yes, No, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<HenselCertificate> certificate;
  /// No: first level without lifts. Unknown: depth searched.
  unsigned level = 0;

  std::string to_string() const {
    switch (kind) {
      case Kind::Yes:
        return certificate->exact_arc ? "yes (exact arc)"
                                      : "yes (level " + std::to_string(certificate->level) + ", e = " +
                                            std::to_string(certificate->minor_order) + ")";
      case Kind::No:
        return "no (" + std::to_string(level) + ")";
      case Kind::Unknown:
        break;
    }
    return "unknown (" + std::to_string(level) + ")";
  }
};

/// True when the digits, read as a polynomial in t (or an integer), already
/// solve every equation exactly.
inline bool is_exact_arc(const AffineModel& X, const JetPoint& j) {
  if (j.mode == JetMode::Mixed) {
    std::vector<Integer> vals;
    for (std::size_t v = 0; v < j.nvars(); ++v) vals.push_back(j.residue(v));
    for (const auto& f : X.equations)
      if (f.evaluate(IntegerRing{}, std::span<const Integer>(vals)) != 0) return false;
    return true;
  }
  for (const auto& f : X.equations) {
    const std::size_t len = static_cast<std::size_t>(f.total_degree()) * j.level + 1;
    std::vector<Series> xs;
    for (const auto& d : j.digits) {
      Series s = d;
      s.resize(std::max(len, s.size()), 0);
      xs.push_back(std::move(s));
    }
    auto v = JetPoly(f, j.field).eval_series(xs, len);
    if (series_order(v) != v.size()) return false;
  }
  return true;
}

/// Smallest order along j of the generators certifying smoothness.
inline Order minor_order(const std::vector<JetPoly>& minors, const JetPoint& j) {
  Order best{static_cast<long>(j.level) + 1, true};
  for (const auto& g : minors) best = min_order(best, order_of_digits(evaluate_on_jet(g, j)));
  return best;
}

/// Bounded search for an arc through j: Yes on a Hensel certificate or exact
/// arc, No when some level up to level + depth has no lift, Unknown otherwise.
inline LiftVerdict lift_jet(const AffineModel& X, const JetPoint& j, unsigned depth, EnumOptions opts = {}) {
  check_jet(X, j);
  LiftVerdict verdict;
  if (is_exact_arc(X, j)) {
    verdict.kind = LiftVerdict::Kind::Yes;
    verdict.certificate = HenselCertificate{j.level, 0, j, true};
    return verdict;
  }
  std::vector<JetPoly> minors;
  if (X.complete_intersection)
    for (const auto& g : jacobian_minors(X.equations, X.vars, X.codim())) minors.emplace_back(g, j.field);
  JetEnumerator en(X, j.mode, j.field, j.level, opts);
  const Integer budget = opts.effective_budget();
  std::vector<JetPoint> frontier{j};
  for (unsigned b = 0;; ++b) {
    const unsigned m = j.level + b;
    if (!minors.empty())
      for (const auto& w : frontier) {
        auto e = minor_order(minors, w);
        if (e.at_least) continue;
        auto ev = static_cast<unsigned>(e.value);
        if (m >= 2 * ev && m - ev >= j.level) {
          verdict.kind = LiftVerdict::Kind::Yes;
          verdict.certificate = HenselCertificate{m, ev, w, false};
          return verdict;
        }
      }
    if (b == depth) break;
    std::vector<JetPoint> next;
    for (const auto& w : frontier) {
      auto ext = en.extensions(w);
      next.insert(next.end(), std::make_move_iterator(ext.begin()), std::make_move_iterator(ext.end()));
      if (Integer(next.size()) > budget) throw BudgetExceeded(Integer(next.size()), budget);
    }
    if (next.empty()) {
      verdict.kind = LiftVerdict::Kind::No;
      verdict.level = m + 1;
      return verdict;
    }
    frontier = std::move(next);
  }
  verdict.kind = LiftVerdict::Kind::Unknown;
  verdict.level = depth;
  return verdict;
}

struct ImageCount {
  Integer lower = 0;
  Integer upper = 0;
  Integer unknown = 0;

  bool exact() const { return lower == upper; }
  std::string to_string() const { return "[" + lower.str() + ", " + upper.str() + "]"; }
};

/// |pi_n(Gr(X))(F_q)| bracketed by lift verdicts.
inline ImageCount image_count(const AffineModel& X, JetMode mode, const FiniteField& field, unsigned level,
                              unsigned depth, EnumOptions opts = {}) {
  ImageCount out;
  JetEnumerator en(X, mode, field, level, opts);
  en.for_each([&](const JetPoint& j) {
    auto v = lift_jet(X, j, depth, opts);
    if (v.kind == LiftVerdict::Kind::Yes) ++out.lower;
    if (v.kind == LiftVerdict::Kind::Unknown) ++out.unknown;
  });
  out.upper = out.lower + out.unknown;
  return out;
}

/// Generators of the Jacobian ideal of h in source coordinates: the maximal
/// minors of [dg ; dh_I] over the source equations g and every d-subset I
/// of target coordinates.
inline std::vector<IntPoly> jacobian_ideal_generators(const ModelMorphism& h) {
  h.validate();
  const auto& Y = h.source;
  const std::size_t d = static_cast<std::size_t>(Y.rel_dim);
  std::vector<IntPoly> out;
  auto gj = jacobian_matrix(Y.equations);
  for (const auto& idx : combinations(h.components.size(), d)) {
    std::vector<IntPoly> rows;
    for (auto i : idx) rows.push_back(h.components[i]);
    PolyMatrix m = gj;
    auto hj = jacobian_matrix(rows);
    m.insert(m.end(), hj.begin(), hj.end());
    if (m.empty()) {
      out.push_back(IntPoly::constant(IntegerRing{}, Y.vars, 1));
      continue;
    }
    auto minors = matrix_minors(m, m.size(), Y.vars);
    for (auto& g : minors)
      if (!g.is_zero()) out.push_back(std::move(g));
  }
  return out;
}

/// ord of Jac_h along a source jet; when the truncation hides the order the
/// jet is lifted up to `depth` more levels and a common exact value is sought.
inline Order ord_jacobian(const ModelMorphism& h, const JetPoint& j, unsigned depth = 0, EnumOptions opts = {}) {
  check_jet(h.source, j);
  if (!is_smooth_point(h.source, j.base_point(), j.field))
    throw ModelError(h.name + ": source is singular at the base point of " + j.to_string());
  std::vector<JetPoly> gens;
  for (const auto& g : jacobian_ideal_generators(h)) gens.emplace_back(g, j.field);
  auto ord = minor_order(gens, j);
  if (!ord.at_least || depth == 0) return ord;
  JetEnumerator en(h.source, j.mode, j.field, j.level, opts);
  std::vector<JetPoint> frontier{j};
  for (unsigned b = 1; b <= depth; ++b) {
    std::vector<JetPoint> next;
    for (const auto& w : frontier) {
      auto ext = en.extensions(w);
      next.insert(next.end(), ext.begin(), ext.end());
    }
    if (next.empty()) break;
    std::optional<Order> common;
    bool agree = true;
    for (const auto& w : next) {
      auto o = minor_order(gens, w);
      if (o.at_least || (common && !(*common == o))) {
        agree = false;
        break;
      }
      common = o;
    }
    if (agree && common) return *common;
    frontier = std::move(next);
  }
  return ord;
}

}  // namespace motint
