#pragma once

#include "motint/polyalg/poly.hpp"

#include <vector>

namespace motint {

using PolyMatrix = std::vector<std::vector<IntPoly>>;

inline PolyMatrix jacobian_matrix(std::span<const IntPoly> fs) {
  PolyMatrix jac;
  for (const auto& f : fs) {
    std::vector<IntPoly> row;
    for (std::size_t j = 0; j < f.nvars(); ++j) row.push_back(f.derivative(j));
    jac.push_back(std::move(row));
  }
  return jac;
}

/// Determinant by cofactor expansion along the first row.
inline IntPoly determinant(const PolyMatrix& m, const IntegerRing& ring, const std::vector<std::string>& vars) {
  const std::size_t n = m.size();
  if (n == 0) return IntPoly::constant(ring, vars, 1);
  if (n == 1) return m[0][0];
  IntPoly acc(ring, vars);
  for (std::size_t col = 0; col < n; ++col) {
    if (m[0][col].is_zero()) continue;
    PolyMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<IntPoly> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    IntPoly term = m[0][col] * determinant(minor, ring, vars);
    if (col % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

/// All k-element subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// All size x size minors of an arbitrary polynomial matrix: row subsets in
/// lexicographic order, column subsets lexicographic within each.
inline std::vector<IntPoly> matrix_minors(const PolyMatrix& m, std::size_t size,
                                          const std::vector<std::string>& vars) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : vars.size();
  if (size > rows && size > 0) throw MathError("minor size exceeds number of rows");
  if (size > cols) throw MathError("minor size exceeds number of columns");
  std::vector<IntPoly> out;
  for (const auto& rs : combinations(rows, size))
    for (const auto& cs : combinations(cols, size)) {
      PolyMatrix sub;
      for (auto r : rs) {
        std::vector<IntPoly> row;
        for (auto c : cs) row.push_back(m[r][c]);
        sub.push_back(std::move(row));
      }
      out.push_back(determinant(sub, IntegerRing{}, vars));
    }
  return out;
}

/// Size x size minors of the Jacobian of `fs` with respect to `vars`.
inline std::vector<IntPoly> jacobian_minors(std::span<const IntPoly> fs, const std::vector<std::string>& vars,
                                            std::size_t size) {
  if (size > fs.size() || size > vars.size())
    throw MathError("jacobian_minors: size " + std::to_string(size) + " exceeds the " +
                    std::to_string(fs.size()) + "x" + std::to_string(vars.size()) + " Jacobian");
  for (const auto& f : fs)
    if (f.vars() != vars) throw MathError("jacobian_minors: polynomial over a different variable list");
  return matrix_minors(jacobian_matrix(fs), size, vars);
}

}  // namespace motint
