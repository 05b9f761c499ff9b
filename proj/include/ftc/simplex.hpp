#ifndef FTC_SIMPLEX_HPP
#define FTC_SIMPLEX_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/rational.hpp"

namespace ftc::lp {

/// Dense simplex tableau over exact rationals.
///
/// Row i reads  sum_j a[i][j] x_j = rhs[i]  in canonical form with respect to
/// basis[i]; `reduced` holds the reduced costs of a minimisation objective and
/// `value` the current objective value. All pivoting uses Bland's smallest-index
/// rule, so neither the primal nor the dual method can cycle.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : a(rows, std::vector<Rational>(cols)), rhs(rows), basis(rows, -1), reduced(cols) {}

  std::size_t rows() const { return a.size(); }
  std::size_t cols() const { return reduced.size(); }

  void pivot(std::size_t r, std::size_t c) {
    const Rational piv = a[r][c];
    detail::ensure(piv != 0, "zero pivot");
    for (auto& x : a[r]) x /= piv;
    rhs[r] /= piv;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < cols(); ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
      rhs[i] -= f * rhs[r];
    }
    if (reduced[c] != 0) {
      const Rational f = reduced[c];
      for (std::size_t j = 0; j < cols(); ++j)
        if (a[r][j] != 0) reduced[j] -= f * a[r][j];
      value += f * rhs[r];
    }
    basis[r] = static_cast<int>(c);
    ++pivots;
  }

  /// Primal simplex from a primal-feasible basis (rhs >= 0). Returns false when
  /// the objective is unbounded below.
  bool primal() {
    for (;;) {
      std::size_t enter = cols();
      for (std::size_t j = 0; j < cols(); ++j)
        if (reduced[j] < 0) {
          enter = j;
          break;
        }
      if (enter == cols()) return true;
      std::size_t leave = rows();
      Rational best;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (a[i][enter] <= 0) continue;
        Rational ratio = rhs[i] / a[i][enter];
        if (leave == rows() || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter);
    }
  }

  /// Dual simplex from a dual-feasible basis (reduced >= 0). Returns false when
  /// the primal is infeasible.
  bool dual() {
    for (;;) {
      std::size_t leave = rows();
      for (std::size_t i = 0; i < rows(); ++i)
        if (rhs[i] < 0 && (leave == rows() || basis[i] < basis[leave])) leave = i;
      if (leave == rows()) return true;
      std::size_t enter = cols();
      Rational best;
      for (std::size_t j = 0; j < cols(); ++j) {
        if (a[leave][j] >= 0) continue;
        Rational ratio = reduced[j] / -a[leave][j];
        if (enter == cols() || ratio < best) {
          enter = j;
          best = ratio;
        }
      }
      if (enter == cols()) return false;
      pivot(leave, enter);
    }
  }

  std::vector<Rational> primal_solution() const {
    std::vector<Rational> x(cols());
    for (std::size_t i = 0; i < rows(); ++i)
      if (basis[i] >= 0) x[basis[i]] = rhs[i];
    return x;
  }

  std::vector<std::vector<Rational>> a;
  std::vector<Rational> rhs;
  std::vector<int> basis;
  std::vector<Rational> reduced;
  Rational value = 0;
  long pivots = 0;
};

struct CoverResult {
  Rational value;
  std::vector<Rational> weights;  ///< one per input set
  std::vector<Rational> duals;    ///< one per universe element (a fractional clique)
  long pivots = 0;
};

/// min sum_S w_S  s.t.  sum_{S ∋ x} w_S >= 1 for every x,  w >= 0.
///
/// Written as  -A w + s = -1  with the surplus variables s as the starting basis;
/// that basis is dual feasible (all costs are non-negative), so the dual simplex
/// runs without a phase one. The final reduced costs of s are the dual values.
inline CoverResult solve_covering_lp(const std::vector<std::vector<int>>& sets, int universe) {
  const std::size_t m = static_cast<std::size_t>(universe);
  const std::size_t ns = sets.size();
  Tableau t(m, ns + m);
  for (std::size_t s = 0; s < ns; ++s)
    for (int x : sets[s]) {
      detail::require(x >= 0 && x < universe, "set element outside the universe");
      t.a[x][s] = -1;
    }
  for (std::size_t i = 0; i < m; ++i) {
    t.a[i][ns + i] = 1;
    t.rhs[i] = -1;
    t.basis[i] = static_cast<int>(ns + i);
  }
  for (std::size_t s = 0; s < ns; ++s) t.reduced[s] = 1;
  if (!t.dual()) throw PreconditionError("covering LP infeasible: some element lies in no set");
  CoverResult out;
  out.value = t.value;
  auto x = t.primal_solution();
  out.weights.assign(x.begin(), x.begin() + static_cast<long>(ns));
  out.duals.assign(t.reduced.begin() + static_cast<long>(ns), t.reduced.end());
  out.pivots = t.pivots;
  return out;
}

/// A basic solution of  A x = b, x >= 0  (b >= 0), or nullopt when none exists.
/// `columns[j]` lists the rows where column j has a 1 (0/1 matrices only).
inline std::optional<std::vector<Rational>> solve_equality_feasibility(
    const std::vector<std::vector<int>>& columns, int rows, const std::vector<Rational>& b) {
  const std::size_t m = static_cast<std::size_t>(rows);
  const std::size_t nc = columns.size();
  detail::require(b.size() == m, "rhs size mismatch");
  Tableau t(m, nc + m);
  for (std::size_t j = 0; j < nc; ++j)
    for (int i : columns[j]) t.a[i][j] = 1;
  for (std::size_t i = 0; i < m; ++i) {
    detail::require(b[i] >= 0, "rhs must be non-negative");
    t.a[i][nc + i] = 1;
    t.rhs[i] = b[i];
    t.basis[i] = static_cast<int>(nc + i);
  }
  // Phase one: minimise the sum of artificials, priced out against the basis.
  for (std::size_t j = 0; j < nc; ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < m; ++i) s += t.a[i][j];
    t.reduced[j] = -s;
  }
  for (std::size_t i = 0; i < m; ++i) t.value += b[i];
  t.primal();
  if (t.value != 0) return std::nullopt;
  auto x = t.primal_solution();
  x.resize(nc);
  return x;
}

}  // namespace ftc::lp

#endif  // FTC_SIMPLEX_HPP
