#pragma once

#include <vector>

namespace aoimf {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Minimize cost . x subject to a_eq x = b_eq, x >= 0.
///
/// Two-phase dense tableau simplex with Bland's anti-cycling rule: correctness
/// over speed, intended for small verification problems. Redundant equality
/// rows are tolerated (artificials stuck at zero are pivoted out or their rows
/// dropped).
LpSolution solve_lp(const std::vector<double>& cost,
                    const std::vector<std::vector<double>>& a_eq,
                    const std::vector<double>& b_eq);

}  // namespace aoimf
