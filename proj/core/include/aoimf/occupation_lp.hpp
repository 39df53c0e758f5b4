#pragma once

#include <vector>

#include "aoimf/mdp.hpp"

namespace aoimf {

/// Stationary state-action occupation measure solving the average-cost MDP
/// as a linear program, used as an independent oracle for the RVI solver.
struct OccupationSolution {
  double rho = 0.0;                          // LP optimum
  std::vector<std::vector<double>> x;        // occupation measure [state][action]
  std::vector<double> m;                     // state marginals
  std::vector<std::vector<double>> policy;   // recovered pi(a | state)
};

/// Minimize sum_{delta,a} x(delta,a) c(delta,a) subject to the normalization
/// sum x = 1 and the stationarity flow constraints, x >= 0, via the dense
/// Bland-rule simplex. For states with zero marginal the recovered policy
/// puts mass one on the lowest-energy action. Guarded to small instances:
/// delta_max * |A| <= 5000.
OccupationSolution occupation_lp_solve(const MdpModel& model);

}  // namespace aoimf
