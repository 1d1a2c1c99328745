#pragma once

#include "motint/greenberg/lift.hpp"

#include <map>
#include <set>

namespace motint {

namespace detail {

/// min over the locus equations of ord along j.
inline Order locus_order(const std::vector<JetPoly>& locus, const JetPoint& j) {
  return minor_order(locus, j);
}

inline std::vector<JetPoly> compile(const std::vector<IntPoly>& fs, const FiniteField& field) {
  std::vector<JetPoly> out;
  for (const auto& f : fs) out.emplace_back(f, field);
  return out;
}

/// Source jets at level n whose base point lies on the locus.
inline void for_each_jet_over(const ModelMorphism& h, const FiniteField& field, unsigned n, const EnumOptions& opts,
                              const std::function<void(const JetPoint&)>& visit) {
  if (h.locus.empty()) throw ModelError(h.name + ": no exceptional locus given");
  JetEnumerator en(h.source, JetMode::Series, field, n, opts);
  en.check_budget();
  std::vector<FieldPoly> locus;
  for (const auto& g : h.locus) locus.emplace_back(g, field);
  for (const auto& p : en.base_points()) {
    if (std::any_of(locus.begin(), locus.end(), [&](const FieldPoly& g) { return g(p) != 0; })) continue;
    en.for_each_from(p, visit);
  }
}

}  // namespace detail

/// nu(E) = 1 + the order of Jac_h along arcs meeting E with contact order 1,
/// sampled on every such jet at `level` over `field`.
inline long nu_of_component(const ModelMorphism& h, const FiniteField& field, unsigned level = 3,
                            EnumOptions opts = {}) {
  h.validate();
  verify_smooth(h.source, field);
  auto locus = detail::compile(h.locus, field);
  auto gens = detail::compile(jacobian_ideal_generators(h), field);
  std::optional<long> value;
  detail::for_each_jet_over(h, field, level, opts, [&](const JetPoint& j) {
    if (!(detail::locus_order(locus, j) == Order{1, false})) return;
    auto e = minor_order(gens, j);
    if (e.at_least)
      throw MathError(h.name + ": Jacobian order exceeds level " + std::to_string(level) + " at " + j.to_string());
    if (value && *value != e.value)
      throw MathError(h.name + ": Jacobian order is not constant along the locus (" + std::to_string(*value) +
                      " and " + std::to_string(e.value) + ")");
    value = e.value;
  });
  if (!value) throw MathError(h.name + ": no jets of contact order 1 with the locus over " + field.describe());
  return 1 + *value;
}

struct GrowthReport {
  long nu = 0;
  int d = 0;
  /// |pi_n(N_E)(F_q)|, the image of all jets over E.
  std::map<unsigned, Integer> counts;
  /// Image of the jets meeting E with contact order exactly 1.
  std::map<unsigned, Integer> contact_counts;
  std::map<unsigned, Rational> ratios;
  std::map<unsigned, Rational> contact_ratios;
  std::optional<unsigned> stable_from;
  bool verdict = false;

  long predicted_exponent(unsigned n) const { return static_cast<long>(n + 1) * d - nu; }
};

namespace detail {

/// First level from which the ratios stay constant to the end of the range,
/// provided at least two levels are stable.
inline std::optional<unsigned> stabilization(const std::map<unsigned, Rational>& ratios) {
  if (ratios.size() < 2) return std::nullopt;
  auto it = ratios.rbegin();
  const Rational last = it->second;
  unsigned from = it->first;
  std::size_t run = 1;
  for (++it; it != ratios.rend() && it->second == last; ++it, ++run) from = it->first;
  if (run < 2) return std::nullopt;
  return from;
}

}  // namespace detail

/// Counts pi_n(N_E) for n in [lo, hi] as the union over charts of the images
/// of jets over E, and tests the dimension law (n+1)d - nu by exact ratio
/// stabilization on the contact-order-1 part.
inline GrowthReport growth_check(const std::vector<ModelMorphism>& charts, const FiniteField& field, unsigned lo,
                                 unsigned hi, EnumOptions opts = {}) {
  if (charts.empty()) throw MathError("growth check needs at least one chart");
  if (lo > hi) throw MathError("empty level range");
  GrowthReport r;
  r.d = charts[0].target.rel_dim;
  for (const auto& h : charts) {
    if (h.target.vars.size() != charts[0].target.vars.size() || h.target.rel_dim != r.d)
      throw ModelError("charts have different targets");
    long nu = nu_of_component(h, field, std::max(lo, 2u), opts);
    if (&h != &charts[0] && nu != r.nu)
      throw MathError("charts disagree on nu (" + std::to_string(r.nu) + " and " + std::to_string(nu) + ")");
    r.nu = nu;
  }
  const Integer q(field.order());
  for (unsigned n = lo; n <= hi; ++n) {
    std::set<std::vector<Series>> all, contact;
    for (const auto& h : charts) {
      auto comps = detail::compile(h.components, field);
      auto locus = detail::compile(h.locus, field);
      detail::for_each_jet_over(h, field, n, opts, [&](const JetPoint& j) {
        std::vector<Series> image;
        for (const auto& c : comps) image.push_back(evaluate_on_jet(c, j));
        if (detail::locus_order(locus, j) == Order{1, false}) contact.insert(image);
        all.insert(std::move(image));
      });
    }
    r.counts[n] = Integer(all.size());
    r.contact_counts[n] = Integer(contact.size());
    const Rational scale = qpow(q, -r.predicted_exponent(n));
    r.ratios[n] = Rational(r.counts[n]) * scale;
    r.contact_ratios[n] = Rational(r.contact_counts[n]) * scale;
  }
  r.stable_from = detail::stabilization(r.contact_ratios);
  r.verdict = r.stable_from.has_value() && r.contact_ratios.rbegin()->second != 0;
  return r;
}

}  // namespace motint
