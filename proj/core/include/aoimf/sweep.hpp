#pragma once

#include <vector>

#include "aoimf/mean_field.hpp"

namespace aoimf {

/// One equilibrium solve of the energy-weight sweep.
struct SweepRecord {
  double eta = 0.0;
  double lambda_star = 0.0;
  double avg_aoi = 0.0;
  double avg_energy = 0.0;
  double rho = 0.0;
  bool converged = false;
  std::vector<int> policy_switch_points;
};

/// Logarithmically spaced grid from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

/// One equilibrium per eta, in grid order. Solver failures surface as
/// converged=false records. When `equilibria` is non-null it receives the
/// full equilibrium per grid point.
std::vector<SweepRecord> sweep_eta(const std::vector<double>& eta_grid,
                                   const SuccessTable& table, const PopulationConfig& pop,
                                   const FixedPointConfig& fp, int delta_max,
                                   std::vector<Equilibrium>* equilibria = nullptr,
                                   int n_threads = 0);

}  // namespace aoimf
