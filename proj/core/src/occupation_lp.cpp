#include "aoimf/occupation_lp.hpp"

#include <stdexcept>

#include "aoimf/simplex.hpp"

namespace aoimf {

OccupationSolution occupation_lp_solve(const MdpModel& model) {
  model.validate();
  const int n = model.delta_max;
  const int k = static_cast<int>(model.actions.size());
  const int n_vars = n * k;
  if (n_vars > 5000)
    throw std::invalid_argument("occupation_lp_solve: instance too large for the dense LP");

  auto var = [k](int s, int a) { return s * k + a; };

  std::vector<double> cost(n_vars);
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < k; ++a) cost[var(s, a)] = model.stage_cost(s + 1, a);

  // Row 0: normalization. Rows 1..n: flow balance per destination state.
  std::vector<std::vector<double>> a_eq(1 + n, std::vector<double>(n_vars, 0.0));
  std::vector<double> b_eq(1 + n, 0.0);
  b_eq[0] = 1.0;
  for (int j = 0; j < n_vars; ++j) a_eq[0][j] = 1.0;
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < k; ++a) a_eq[1 + s][var(s, a)] += 1.0;
  for (int s = 0; s < n; ++s) {
    const int next = model.next_on_failure(s + 1) - 1;
    for (int a = 0; a < k; ++a) {
      a_eq[1 + 0][var(s, a)] -= model.p[a];
      a_eq[1 + next][var(s, a)] -= 1.0 - model.p[a];
    }
  }

  const LpSolution lp = solve_lp(cost, a_eq, b_eq);
  if (lp.status != LpStatus::optimal)
    throw std::runtime_error("occupation_lp_solve: LP not optimal (bounded polytope expected)");

  OccupationSolution sol;
  sol.rho = lp.objective;
  sol.x.assign(n, std::vector<double>(k, 0.0));
  sol.m.assign(n, 0.0);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < k; ++a) {
      sol.x[s][a] = lp.x[var(s, a)];
      sol.m[s] += sol.x[s][a];
    }
  }

  int fallback = 0;
  for (int a = 1; a < k; ++a) {
    const Action cand = model.actions[a], best = model.actions[fallback];
    if (cand.energy() < best.energy() ||
        (cand.energy() == best.energy() &&
         (cand.d < best.d || (cand.d == best.d && cand.q < best.q))))
      fallback = a;
  }
  sol.policy.assign(n, std::vector<double>(k, 0.0));
  for (int s = 0; s < n; ++s) {
    if (sol.m[s] > 1e-12) {
      for (int a = 0; a < k; ++a) sol.policy[s][a] = sol.x[s][a] / sol.m[s];
    } else {
      sol.policy[s][fallback] = 1.0;
    }
  }
  return sol;
}

}  // namespace aoimf
