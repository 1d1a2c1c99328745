#pragma once

#include "motint/greenberg/jet.hpp"

#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

namespace motint {

class BudgetExceeded : public MathError {
 public:
  BudgetExceeded(const Integer& required, const Integer& budget)
      : MathError("search space " + required.str() + " exceeds budget " + budget.str() +
                  " (raise it with --budget or GREENBERG_BUDGET)"),
        required_(required),
        budget_(budget) {}
  const Integer& required() const { return required_; }
  const Integer& budget() const { return budget_; }

 private:
  Integer required_;
  Integer budget_;
};

inline Integer default_budget() {
  if (const char* env = std::getenv("GREENBERG_BUDGET")) {
    try {
      return Integer(std::string(env));
    } catch (const std::exception&) {
      throw MathError(std::string("GREENBERG_BUDGET is not an integer: ") + env);
    }
  }
  return Integer(100000000);
}

struct EnumOptions {
  std::optional<Integer> budget;
  unsigned workers = 1;

  Integer effective_budget() const { return budget ? *budget : default_budget(); }
};

/// Affine solution set {b : A b = rhs} over F_q.
struct LinearSolutions {
  bool consistent = false;
  FieldPoint particular;
  std::vector<FieldPoint> kernel;

  template <class F>
  void for_each(const FiniteField& field, F&& visit) const {
    if (!consistent) return;
    const auto q = static_cast<FiniteField::value_type>(field.order());
    std::vector<FiniteField::value_type> coeffs(kernel.size(), 0);
    FieldPoint b = particular;
    while (true) {
      visit(static_cast<const FieldPoint&>(b));
      std::size_t i = 0;
      while (i < coeffs.size() && ++coeffs[i] == q) coeffs[i++] = 0;
      if (i == coeffs.size()) break;
      b = particular;
      for (std::size_t r = 0; r < kernel.size(); ++r)
        if (coeffs[r])
          for (std::size_t c = 0; c < b.size(); ++c) b[c] = field.add(b[c], field.mul(coeffs[r], kernel[r][c]));
    }
  }
};

inline LinearSolutions solve_linear(const FiniteField& field, std::vector<FieldPoint> a, FieldPoint rhs,
                                    std::size_t ncols) {
  const std::size_t rows = a.size();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows; ++c) {
    std::size_t s = r;
    while (s < rows && a[s][c] == 0) ++s;
    if (s == rows) continue;
    std::swap(a[s], a[r]);
    std::swap(rhs[s], rhs[r]);
    auto inv = field.inv(a[r][c]);
    for (auto& x : a[r]) x = field.mul(x, inv);
    rhs[r] = field.mul(rhs[r], inv);
    for (std::size_t o = 0; o < rows; ++o) {
      if (o == r || a[o][c] == 0) continue;
      auto f = a[o][c];
      for (std::size_t k = 0; k < ncols; ++k) a[o][k] = field.sub(a[o][k], field.mul(f, a[r][k]));
      rhs[o] = field.sub(rhs[o], field.mul(f, rhs[r]));
    }
    pivots.push_back(c);
    ++r;
  }
  LinearSolutions out;
  for (std::size_t o = r; o < rows; ++o)
    if (rhs[o] != 0) return out;
  out.consistent = true;
  out.particular.assign(ncols, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) out.particular[pivots[i]] = rhs[i];
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    FieldPoint v(ncols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = field.neg(a[i][f]);
    out.kernel.push_back(std::move(v));
  }
  return out;
}

/// Level-by-level enumeration of Gr_n(X)(F_q). Above level 0 the new digit
/// vector b solves [f(a)]_{k} + J(a_0) b = 0, so each node is extended by
/// solving a linear system instead of scanning F_q^N.
class JetEnumerator {
 public:
  JetEnumerator(AffineModel X, JetMode mode, FiniteField field, unsigned level, EnumOptions opts = {})
      : X_(std::move(X)), mode_(mode), field_(std::move(field)), level_(level), opts_(std::move(opts)) {
    if (mode_ == JetMode::Mixed) {
      if (field_.degree() != 1)
        throw MathError("mixed mode supports only prime residue fields (got " + field_.describe() + ")");
    }
    for (const auto& f : X_.equations) {
      eqs_.emplace_back(f, field_);
      std::vector<FieldPoly> row;
      for (std::size_t v = 0; v < X_.ambient_dim(); ++v) row.emplace_back(f.derivative(v), field_);
      jac_.push_back(std::move(row));
    }
  }

  const AffineModel& model() const { return X_; }
  const FiniteField& field() const { return field_; }
  JetMode mode() const { return mode_; }
  unsigned level() const { return level_; }

  /// q^{(n+1)N}, the size of the naive search space.
  Integer search_space(unsigned level) const {
    return ipow(Integer(field_.order()), static_cast<unsigned long>(level + 1) * X_.ambient_dim());
  }

  void check_budget() const {
    auto need = search_space(level_);
    auto budget = opts_.effective_budget();
    if (need > budget) throw BudgetExceeded(need, budget);
    if (mode_ == JetMode::Mixed) checked_prime_power(field_.characteristic(), level_ + 2);
  }

  std::vector<FieldPoint> base_points() const {
    std::vector<FieldPoint> out;
    for_each_field_point(X_.equations, X_.ambient_dim(), field_, [&](const FieldPoint& p) { out.push_back(p); });
    return out;
  }

  Integer count() const {
    check_budget();
    auto base = base_points();
    const unsigned w = std::max(1u, std::min<unsigned>(opts_.workers, static_cast<unsigned>(base.size())));
    if (w <= 1) {
      Integer total = 0;
      for (const auto& p : base) total += count_from(p);
      return total;
    }
    std::vector<Integer> partial(w, 0);
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned t = 0; t < w; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < base.size(); i += w) partial[t] += count_from(base[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    Integer total = 0;
    for (const auto& c : partial) total += c;
    return total;
  }

  /// Visits every jet in depth-first order (not sorted).
  void for_each(const std::function<void(const JetPoint&)>& visit) const {
    check_budget();
    for (const auto& p : base_points()) for_each_from(p, visit);
  }

  /// Jets over one base point.
  void for_each_from(const FieldPoint& p, const std::function<void(const JetPoint&)>& visit) const {
    JetPoint j{mode_, field_, level_, {}};
    for (auto x : p) {
      Series d(level_ + 1, 0);
      d[0] = x;
      j.digits.push_back(std::move(d));
    }
    auto jac = jacobian_at(p);
    descend(j, 0, jac, visit);
  }

  std::vector<JetPoint> collect() const {
    std::vector<JetPoint> out;
    for_each([&](const JetPoint& j) { out.push_back(j); });
    std::sort(out.begin(), out.end());
    return out;
  }

  /// All lifts of a valid jet to level + 1.
  std::vector<JetPoint> extensions(const JetPoint& j) const {
    JetPoint w = j;
    w.level = j.level + 1;
    for (auto& d : w.digits) d.resize(w.level + 1, 0);
    std::vector<JetPoint> out;
    auto sols = step(w, j.level + 1, jacobian_at(j.base_point()));
    sols.for_each(field_, [&](const FieldPoint& b) {
      for (std::size_t v = 0; v < b.size(); ++v) w.digits[v][w.level] = b[v];
      out.push_back(w);
    });
    return out;
  }

 private:
  std::vector<FieldPoint> jacobian_at(const FieldPoint& p) const {
    std::vector<FieldPoint> m;
    for (const auto& row : jac_) {
      FieldPoint r;
      for (const auto& d : row) r.push_back(d(p));
      m.push_back(std::move(r));
    }
    return m;
  }

  /// Solutions b for the digit at position k, given digits 0..k-1 of w.
  LinearSolutions step(JetPoint& w, unsigned k, const std::vector<FieldPoint>& jac) const {
    for (auto& d : w.digits) d[k] = 0;
    FieldPoint rhs;
    if (mode_ == JetMode::Series) {
      for (const auto& f : eqs_) rhs.push_back(field_.neg(f.eval_series(w.digits, k + 1)[k]));
    } else {
      const std::uint64_t p = field_.characteristic();
      const std::uint64_t pk = checked_prime_power(p, k);
      const std::uint64_t mod = checked_prime_power(p, k + 1);
      auto res = jet_residues(w, k + 1);
      for (const auto& f : eqs_) {
        auto v = f.eval_residue(res, mod);
        rhs.push_back(field_.neg(static_cast<FiniteField::value_type>((v / pk) % p)));
      }
    }
    return solve_linear(field_, jac, std::move(rhs), X_.ambient_dim());
  }

  void descend(JetPoint& w, unsigned k, const std::vector<FieldPoint>& jac,
               const std::function<void(const JetPoint&)>& visit) const {
    if (k == level_) {
      visit(w);
      return;
    }
    auto sols = step(w, k + 1, jac);
    sols.for_each(field_, [&](const FieldPoint& b) {
      for (std::size_t v = 0; v < b.size(); ++v) w.digits[v][k + 1] = b[v];
      descend(w, k + 1, jac, visit);
    });
  }

  Integer count_from(const FieldPoint& p) const {
    if (level_ == 0) return 1;
    JetPoint j{mode_, field_, level_, {}};
    for (auto x : p) {
      Series d(level_ + 1, 0);
      d[0] = x;
      j.digits.push_back(std::move(d));
    }
    auto jac = jacobian_at(p);
    Integer total = 0;
    count_descend(j, 0, jac, total);
    return total;
  }

  void count_descend(JetPoint& w, unsigned k, const std::vector<FieldPoint>& jac, Integer& total) const {
    auto sols = step(w, k + 1, jac);
    if (!sols.consistent) return;
    if (k + 1 == level_) {
      total += ipow(Integer(field_.order()), sols.kernel.size());
      return;
    }
    sols.for_each(field_, [&](const FieldPoint& b) {
      for (std::size_t v = 0; v < b.size(); ++v) w.digits[v][k + 1] = b[v];
      count_descend(w, k + 1, jac, total);
    });
  }

  AffineModel X_;
  JetMode mode_;
  FiniteField field_;
  unsigned level_;
  EnumOptions opts_;
  std::vector<JetPoly> eqs_;
  std::vector<std::vector<FieldPoly>> jac_;
};

inline Integer count_jets(const AffineModel& X, JetMode mode, const FiniteField& field, unsigned level,
                          EnumOptions opts = {}) {
  return JetEnumerator(X, mode, field, level, std::move(opts)).count();
}

struct FibrationResult {
  bool holds = false;
  Integer lower;
  Integer upper;
};

/// count(n + m) against count(n) * q^{dm} for a smooth model.
inline FibrationResult fibration_check(const AffineModel& X, unsigned n, unsigned m, const FiniteField& field,
                                       JetMode mode = JetMode::Series, EnumOptions opts = {}) {
  if (!X.claims_smooth_over(field.characteristic()))
    throw ModelError("fibration check needs a model declared smooth over " + field.describe());
  verify_smooth(X, field);
  FibrationResult r;
  r.lower = count_jets(X, mode, field, n, opts);
  r.upper = count_jets(X, mode, field, n + m, opts);
  r.holds = r.upper == r.lower * ipow(Integer(field.order()), static_cast<unsigned long>(X.rel_dim) * m);
  return r;
}

}  // namespace motint
