#pragma once

#include "motint/gring/virtual_class.hpp"

#include <algorithm>
#include <span>

namespace motint {

/// An element of the completed ring known up to F^{tail_level}: the true value
/// differs from `partial` by something in F^{tail_level}.
struct CompletedClass {
  VirtualClass partial;
  long tail_level = 0;

  /// Exact elements carry an unbounded tail level.
  static constexpr long kExact = 1L << 40;

  static CompletedClass exact(VirtualClass v) { return {std::move(v), kExact}; }
  bool is_exact() const { return tail_level >= kExact; }

  friend CompletedClass operator+(const CompletedClass& a, const CompletedClass& b) {
    return {a.partial + b.partial, std::min(a.tail_level, b.tail_level)};
  }

  /// (a + F^m)(b + F^m') lies in ab + F^{min(m' - vd(a), m - vd(b), m + m')}.
  friend CompletedClass operator*(const CompletedClass& a, const CompletedClass& b) {
    auto vd = [](const VirtualClass& v) { return v.virtual_dim().value_or(-CompletedClass::kExact); };
    long level = std::min({b.tail_level - vd(a.partial), a.tail_level - vd(b.partial), a.tail_level + b.tail_level});
    return {a.partial * b.partial, std::min(level, kExact)};
  }

  /// Whether the two descriptions are compatible: the difference of partials
  /// lies in the coarser tail filtration step.
  bool agrees_with(const CompletedClass& o) const {
    return (partial - o.partial).in_filtration(std::min(tail_level, o.tail_level));
  }

  std::string to_string() const {
    if (is_exact()) return partial.to_string();
    return partial.to_string() + " + F^" + std::to_string(tail_level);
  }
};

class ContractViolation : public MathError {
 public:
  using MathError::MathError;
};

/// Sums terms[0, cutoff) and declares the remaining (probed) terms to lie in
/// F^m. A probed term outside F^m cannot be tail-bounded and is rejected.
inline CompletedClass sum_to_tolerance(std::span<const VirtualClass> terms, std::size_t cutoff, long m) {
  if (cutoff > terms.size()) throw MathError("sum_to_tolerance: cutoff beyond the term stream");
  CompletedClass out{VirtualClass::zero(), m};
  for (std::size_t i = 0; i < cutoff; ++i) out.partial += terms[i];
  for (std::size_t i = cutoff; i < terms.size(); ++i)
    if (!terms[i].in_filtration(m)) {
      auto d = terms[i].virtual_dim();
      throw ContractViolation("sum_to_tolerance: term " + std::to_string(i) + " has virtual dimension " +
                              std::to_string(d.value_or(0)) + " > " + std::to_string(-m) +
                              " and cannot lie in the tail F^" + std::to_string(m));
    }
  return out;
}

/// Every term consumed; the caller vouches for the unconsumed remainder.
inline CompletedClass sum_to_tolerance(std::span<const VirtualClass> terms, long m) {
  return sum_to_tolerance(terms, terms.size(), m);
}

}  // namespace motint
