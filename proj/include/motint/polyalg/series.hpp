#pragma once

#include "motint/polyalg/poly.hpp"

#include <vector>

namespace motint {

using Series = std::vector<FiniteField::value_type>;

/// f(assignment) mod t^{n+1}, with every series of length n + 1 over `field`.
inline Series substitute_series(const IntPoly& f, std::span<const Series> assignment, const FiniteField& field,
                                unsigned level) {
  TruncatedSeries<FiniteField> ring(field, level);
  if (assignment.size() != f.nvars())
    throw MathError("substitute_series: expected " + std::to_string(f.nvars()) + " series, got " +
                    std::to_string(assignment.size()));
  for (const auto& s : assignment)
    if (s.size() != ring.length())
      throw MathError("substitute_series: level mismatch (series of length " + std::to_string(s.size()) +
                      " at level " + std::to_string(level) + ")");
  return f.evaluate(ring, assignment);
}

/// Order of a truncated series; returns length() when it is zero.
inline unsigned series_order(const Series& s) {
  for (unsigned i = 0; i < s.size(); ++i)
    if (s[i] != 0) return i;
  return static_cast<unsigned>(s.size());
}

}  // namespace motint
