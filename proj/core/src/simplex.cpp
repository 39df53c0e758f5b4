#include "aoimf/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace aoimf {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-9;
constexpr double kFeasEps = 1e-8;
constexpr long kMaxPivots = 200000;

/// Tableau rows: one per remaining constraint, columns 0..n_total-1 plus RHS.
struct Tableau {
  int n_total = 0;
  std::vector<std::vector<double>> rows;  // each of size n_total + 1
  std::vector<int> basis;                 // basic column per row

  double rhs(int r) const { return rows[r][n_total]; }

  void pivot(int r, int c) {
    const double piv = rows[r][c];
    for (double& v : rows[r]) v /= piv;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r) continue;
      const double factor = rows[i][c];
      if (factor == 0.0) continue;
      for (int j = 0; j <= n_total; ++j) rows[i][j] -= factor * rows[r][j];
    }
    basis[r] = c;
  }
};

/// Gauss-Jordan reduce [B | R] to [I | B^-1 R]. B is given by the basis
/// columns of `a` restricted to `rows`; R is [a | b]. Returns false when B is
/// numerically singular. On success `out` holds B^-1 [a | b] with row i basic
/// in column basis[i].
bool reduce_basis(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                  const std::vector<int>& kept_rows, const std::vector<int>& basis,
                  std::vector<std::vector<double>>& out) {
  const int m = static_cast<int>(kept_rows.size());
  const int n = static_cast<int>(a[0].size());
  std::vector<std::vector<double>> aug(m, std::vector<double>(m + n + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    const int r = kept_rows[i];
    for (int k = 0; k < m; ++k) aug[i][k] = a[r][basis[k]];
    for (int j = 0; j < n; ++j) aug[i][m + j] = a[r][j];
    aug[i][m + n] = b[r];
  }
  for (int col = 0; col < m; ++col) {
    int piv = -1;
    double best = 1e-12;
    for (int i = col; i < m; ++i) {
      if (std::abs(aug[i][col]) > best) {
        best = std::abs(aug[i][col]);
        piv = i;
      }
    }
    if (piv < 0) return false;
    std::swap(aug[col], aug[piv]);
    const double scale = aug[col][col];
    for (double& v : aug[col]) v /= scale;
    for (int i = 0; i < m; ++i) {
      if (i == col) continue;
      const double factor = aug[i][col];
      if (factor == 0.0) continue;
      for (int j = col; j <= m + n; ++j) aug[i][j] -= factor * aug[col][j];
    }
  }
  out.assign(m, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) out[i][j] = aug[i][m + j];
  return true;
}

/// Simplex iterations with reduced costs recomputed from scratch every pivot
/// (the problems here are tiny). Entering: Bland's lowest eligible index.
/// Leaving: among the minimum-ratio rows the largest pivot element, switching
/// to Bland's lowest basis index after a long degenerate stall so cycling
/// cannot persist. Returns false on unbounded.
bool optimize(Tableau& t, const std::vector<double>& cost, const std::vector<bool>& allowed) {
  const int m = static_cast<int>(t.rows.size());
  std::vector<double> reduced(t.n_total);
  double last_objective = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (long pivots = 0; pivots < kMaxPivots; ++pivots) {
    for (int j = 0; j < t.n_total; ++j) {
      double r = cost[j];
      for (int i = 0; i < m; ++i) {
        const double cb = cost[t.basis[i]];
        if (cb != 0.0) r -= cb * t.rows[i][j];
      }
      reduced[j] = r;
    }

    int enter = -1;
    for (int j = 0; j < t.n_total; ++j) {
      if (!allowed[j] || reduced[j] >= -kCostEps) continue;
      enter = j;
      break;
    }
    if (enter < 0) return true;

    double min_ratio = -1.0;
    for (int i = 0; i < m; ++i) {
      const double a = t.rows[i][enter];
      if (a <= kPivotEps) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      if (min_ratio < 0.0 || ratio < min_ratio) min_ratio = ratio;
    }
    if (min_ratio < 0.0) return false;

    int leave = -1;
    const double whisker = 1e-12 * (1.0 + min_ratio);
    for (int i = 0; i < m; ++i) {
      const double a = t.rows[i][enter];
      if (a <= kPivotEps) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      if (ratio > min_ratio + whisker) continue;
      if (leave < 0) {
        leave = i;
      } else if (stall > 500) {
        if (t.basis[i] < t.basis[leave]) leave = i;  // strict Bland fallback
      } else if (a > t.rows[leave][enter]) {
        leave = i;  // largest pivot keeps the tableau scaled
      }
    }
    t.pivot(leave, enter);
    for (int i = 0; i < m; ++i) {
      double& r = t.rows[i][t.n_total];
      if (r < 0.0 && r > -1e-11) r = 0.0;
    }

    double objective = 0.0;
    for (int i = 0; i < m; ++i) objective += cost[t.basis[i]] * t.rhs(i);
    if (objective < last_objective - 1e-12) {
      stall = 0;
      last_objective = objective;
    } else {
      ++stall;
    }
  }
  throw std::runtime_error("solve_lp: pivot budget exhausted");
}

}  // namespace

LpSolution solve_lp(const std::vector<double>& cost,
                    const std::vector<std::vector<double>>& a_eq,
                    const std::vector<double>& b_eq) {
  const int n = static_cast<int>(cost.size());
  const int m = static_cast<int>(a_eq.size());
  if (static_cast<int>(b_eq.size()) != m)
    throw std::invalid_argument("solve_lp: |b| != rows(A)");
  for (const auto& row : a_eq)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("solve_lp: ragged A");

  // Phase 1 tableau: sign-flipped rows so b >= 0, one artificial per row.
  Tableau t;
  t.n_total = n + m;
  t.rows.assign(m, std::vector<double>(t.n_total + 1, 0.0));
  t.basis.resize(m);
  std::vector<int> origin(m);  // tableau row -> original constraint row
  for (int i = 0; i < m; ++i) {
    const double sign = b_eq[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.rows[i][j] = sign * a_eq[i][j];
    t.rows[i][n + i] = 1.0;
    t.rows[i][t.n_total] = sign * b_eq[i];
    t.basis[i] = n + i;
    origin[i] = i;
  }

  std::vector<double> phase1_cost(t.n_total, 0.0);
  for (int j = n; j < t.n_total; ++j) phase1_cost[j] = 1.0;
  std::vector<bool> allowed(t.n_total, true);
  if (!optimize(t, phase1_cost, allowed)) return {LpStatus::infeasible, 0.0, {}};

  double artificial_mass = 0.0;
  for (int i = 0; i < static_cast<int>(t.rows.size()); ++i)
    if (t.basis[i] >= n) artificial_mass += std::abs(t.rhs(i));
  if (artificial_mass > kFeasEps) return {LpStatus::infeasible, 0.0, {}};

  // Drive artificials out (largest structural coefficient as pivot); rows
  // with no structural support left are redundant and dropped.
  for (int i = static_cast<int>(t.rows.size()) - 1; i >= 0; --i) {
    if (t.basis[i] < n) continue;
    int col = -1;
    double best = kPivotEps;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t.rows[i][j]) > best) {
        best = std::abs(t.rows[i][j]);
        col = j;
      }
    }
    if (col >= 0) {
      t.pivot(i, col);
    } else {
      t.rows.erase(t.rows.begin() + i);
      t.basis.erase(t.basis.begin() + i);
      origin.erase(origin.begin() + i);
    }
  }

  // Refactorize: rebuild the tableau for the current basis from the original
  // data, discarding the roundoff phase 1 accumulated. Artificial columns are
  // gone from here on.
  auto refactorize = [&](Tableau& tab) {
    std::vector<std::vector<double>> clean;
    if (!reduce_basis(a_eq, b_eq, origin, tab.basis, clean)) return false;
    tab.n_total = n;
    tab.rows = std::move(clean);
    for (auto& row : tab.rows)
      for (double& v : row)
        if (std::abs(v) < 1e-13) v = 0.0;
    return true;
  };
  if (!refactorize(t)) return {LpStatus::infeasible, 0.0, {}};

  std::vector<double> phase2_cost(cost);
  allowed.assign(n, true);
  if (!optimize(t, phase2_cost, allowed)) return {LpStatus::unbounded, 0.0, {}};

  // Extract x by solving the final basis system fresh.
  if (!refactorize(t)) return {LpStatus::infeasible, 0.0, {}};
  LpSolution sol;
  sol.status = LpStatus::optimal;
  sol.x.assign(n, 0.0);
  for (int i = 0; i < static_cast<int>(t.rows.size()); ++i) {
    double v = t.rhs(i);
    if (v < 0.0 && v > -1e-11) v = 0.0;
    sol.x[t.basis[i]] = v;
  }
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += cost[j] * sol.x[j];
  return sol;
}

}  // namespace aoimf
