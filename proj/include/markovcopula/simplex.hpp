#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace markovcopula {

// Dense two-phase primal simplex for  min c.x  s.t.  A x = b, x >= 0.
// Bland's rule (lowest eligible index enters; ratio ties resolved toward the
// lowest basis index) guarantees termination without cycling. Sized for tiny
// problems (at most a few hundred variables), so no factorization updates.
struct SimplexResult {
  enum class Status { optimal, infeasible, unbounded, iteration_limit };
  Status status = Status::iteration_limit;
  std::vector<double> x;
  double objective = 0.0;
};

namespace simplex_detail {

inline constexpr double kPivotTol = 1e-9;
inline constexpr double kFeasibilityTol = 1e-7;

struct Tableau {
  std::size_t m, n;                     // rows, real variables
  std::vector<std::vector<double>> t;   // m rows of n + m + 1 (artificials + rhs)
  std::vector<std::size_t> basis;       // basis variable per row
  std::vector<bool> row_active;

  std::size_t rhs_col() const { return n + m; }

  void pivot(std::size_t pr, std::size_t pc) {
    std::vector<double>& prow = t[pr];
    const double inv = 1.0 / prow[pc];
    for (double& v : prow) v *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == pr || !row_active[r]) continue;
      const double factor = t[r][pc];
      if (factor == 0.0) continue;
      for (std::size_t cc = 0; cc <= rhs_col(); ++cc) t[r][cc] -= factor * prow[cc];
      t[r][pc] = 0.0;
    }
    basis[pr] = pc;
  }
};

// Runs Bland-rule simplex iterations on the active rows against the given
// cost vector (length n + m; artificial columns may be barred by +infinity).
// Returns optimal / unbounded / iteration_limit.
inline SimplexResult::Status iterate(Tableau& tab, const std::vector<double>& cost,
                                     std::size_t max_iter) {
  const std::size_t width = tab.n + tab.m;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    // Reduced costs: r_j = c_j - sum_i c_basis(i) * T[i][j].
    std::size_t enter = width;
    for (std::size_t j = 0; j < width; ++j) {
      if (cost[j] == std::numeric_limits<double>::infinity()) continue;
      double r = cost[j];
      bool in_basis = false;
      for (std::size_t i = 0; i < tab.m; ++i) {
        if (!tab.row_active[i]) continue;
        if (tab.basis[i] == j) { in_basis = true; break; }
        const double cb = cost[tab.basis[i]];
        if (cb != 0.0) r -= cb * tab.t[i][j];
      }
      if (in_basis) continue;
      if (r < -kPivotTol) { enter = j; break; }  // Bland: lowest eligible index
    }
    if (enter == width) return SimplexResult::Status::optimal;

    std::size_t leave_row = tab.m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < tab.m; ++i) {
      if (!tab.row_active[i]) continue;
      const double a = tab.t[i][enter];
      if (a <= kPivotTol) continue;
      const double ratio = tab.t[i][tab.rhs_col()] / a;
      if (leave_row == tab.m || ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && tab.basis[i] < tab.basis[leave_row])) {
        leave_row = i;
        best_ratio = ratio;
      }
    }
    if (leave_row == tab.m) return SimplexResult::Status::unbounded;
    tab.pivot(leave_row, enter);
  }
  return SimplexResult::Status::iteration_limit;
}

}  // namespace simplex_detail

inline SimplexResult simplex_solve(const std::vector<std::vector<double>>& a,
                                   const std::vector<double>& b, const std::vector<double>& c,
                                   std::size_t max_iter = 50000) {
  using namespace simplex_detail;
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? c.size() : a.front().size();
  if (b.size() != m) throw std::invalid_argument("simplex_solve: rhs size mismatch");
  if (c.size() != n) throw std::invalid_argument("simplex_solve: cost size mismatch");

  Tableau tab;
  tab.m = m;
  tab.n = n;
  tab.basis.resize(m);
  tab.row_active.assign(m, true);
  tab.t.assign(m, std::vector<double>(n + m + 1, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("simplex_solve: ragged constraint matrix");
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;  // normalize rhs >= 0
    for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = sign * a[i][j];
    tab.t[i][n + i] = 1.0;  // artificial
    tab.t[i][tab.rhs_col()] = sign * b[i];
    tab.basis[i] = n + i;
  }

  SimplexResult result;

  // Phase 1: minimize the artificial mass.
  std::vector<double> phase1_cost(n + m, 0.0);
  for (std::size_t j = n; j < n + m; ++j) phase1_cost[j] = 1.0;
  const auto st1 = iterate(tab, phase1_cost, max_iter);
  if (st1 == SimplexResult::Status::iteration_limit) {
    result.status = st1;
    return result;
  }
  double artificial_mass = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.row_active[i] && tab.basis[i] >= n) artificial_mass += tab.t[i][tab.rhs_col()];
  if (artificial_mass > kFeasibilityTol) {
    result.status = SimplexResult::Status::infeasible;
    return result;
  }

  // Drive leftover (zero-valued) artificials out of the basis; rows with no
  // real pivot are linearly dependent and get deactivated.
  for (std::size_t i = 0; i < m; ++i) {
    if (!tab.row_active[i] || tab.basis[i] < n) continue;
    std::size_t pc = n;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(tab.t[i][j]) > kPivotTol) { pc = j; break; }
    if (pc == n) {
      tab.row_active[i] = false;
    } else {
      tab.pivot(i, pc);
    }
  }

  // Phase 2: real objective with artificial columns barred.
  std::vector<double> phase2_cost(n + m, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = c[j];
  for (std::size_t i = 0; i < m; ++i)
    if (tab.row_active[i] && tab.basis[i] >= n) phase2_cost[tab.basis[i]] = 0.0;
  const auto st2 = iterate(tab, phase2_cost, max_iter);
  if (st2 != SimplexResult::Status::optimal) {
    result.status = st2;
    return result;
  }

  result.status = SimplexResult::Status::optimal;
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.row_active[i] && tab.basis[i] < n)
      result.x[tab.basis[i]] = std::max(0.0, tab.t[i][tab.rhs_col()]);
  result.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
  return result;
}

// Lexicographically smallest optimal solution: after fixing the optimal
// objective value as an equality, minimize x_0, fix it, minimize x_1, and so
// on. Deterministic representative of a possibly non-unique optimum.
inline SimplexResult simplex_lexmin(const std::vector<std::vector<double>>& a,
                                    const std::vector<double>& b, const std::vector<double>& c,
                                    std::size_t max_iter = 50000) {
  SimplexResult base = simplex_solve(a, b, c, max_iter);
  if (base.status != SimplexResult::Status::optimal) return base;
  const std::size_t n = c.size();

  std::vector<std::vector<double>> rows = a;
  std::vector<double> rhs = b;
  rows.push_back(c);
  rhs.push_back(base.objective);

  SimplexResult current = base;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> ej(n, 0.0);
    ej[j] = 1.0;
    SimplexResult sub = simplex_solve(rows, rhs, ej, max_iter);
    if (sub.status != SimplexResult::Status::optimal) return base;  // keep the plain optimum
    current = sub;
    current.objective = 0.0;
    for (std::size_t k = 0; k < n; ++k) current.objective += c[k] * current.x[k];
    rows.push_back(std::move(ej));
    rhs.push_back(std::max(0.0, sub.x[j]));
  }
  current.status = SimplexResult::Status::optimal;
  return current;
}

}  // namespace markovcopula
