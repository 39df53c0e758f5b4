#pragma once

#include <vector>

#include "aoimf/action.hpp"
#include "aoimf/mdp.hpp"
#include "aoimf/success_table.hpp"

namespace aoimf {

struct PopulationConfig {
  int n_devices = 30;
  int pools = 3;
  double frame_time = 1.0;

  void validate() const;  // N >= 2, pools >= 1, frame_time > 0
};

/// Per-pool replica start-time intensity induced by a policy and population
/// AoI distribution: (N-1)/T_f * sum_delta m(delta) E(pi(delta)) / R.
double induced_load(const std::vector<double>& m, const std::vector<Action>& policy,
                    const PopulationConfig& pop);

/// Randomized-policy variant: pi[state][action] mixes over `actions`.
double induced_load(const std::vector<double>& m,
                    const std::vector<std::vector<double>>& policy,
                    const std::vector<Action>& actions, const PopulationConfig& pop);

struct StationaryResult {
  std::vector<double> m;
  bool degenerate = false;  // chain absorbs at delta_max (point mass)
};

/// Stationary AoI distribution of the reset chain with per-state success
/// probability p_by_state: m(delta) proportional to prod_{k<delta}(1-p(k)),
/// with the truncation state absorbing the tail mass.
StationaryResult stationary_distribution(const std::vector<double>& p_by_state);

/// Same, with p(delta) = p_hat(policy(delta); lambda) from the table.
StationaryResult stationary_distribution(const std::vector<Action>& policy, double lambda,
                                         const SuccessTable& table, int delta_max);

struct FixedPointConfig {
  double damp_load = 0.3;   // beta: load update damping
  double damp_dist = 0.5;   // distribution update damping
  double tol_load = 1e-3;
  double tol_dist = 1e-4;
  int max_outer_iters = 500;
  double lambda_init = 0.0;
  std::vector<double> m_init;  // empty -> uniform
  RviOptions rvi;
};

/// Self-consistent mean-field operating point: best-response policy, its
/// stationary AoI distribution, and the load they induce.
struct Equilibrium {
  std::vector<Action> policy;  // action per state 1..delta_max
  std::vector<double> m;       // stationary AoI distribution
  double lambda_star = 0.0;
  double rho = 0.0;            // average cost of the best response
  double avg_aoi = 0.0;
  double avg_energy = 0.0;
  bool converged = false;
  int outer_iters = 0;
  double load_residual = 0.0;
  double dist_residual = 0.0;
  bool degenerate = false;  // all-idle style operating point
  std::vector<double> v;    // relative values, for export
};

/// Damped nested fixed-point iteration: best response via relative value
/// iteration, damped load update, damped population update. Returns the
/// converged point, or the lowest-residual iterate with converged=false
/// after max_outer_iters.
Equilibrium solve_equilibrium(double eta, const SuccessTable& table,
                              const PopulationConfig& pop, const FixedPointConfig& fp,
                              int delta_max);

/// (average AoI, average energy) of the equilibrium's stationary chain.
std::pair<double, double> equilibrium_metrics(const Equilibrium& eq);

}  // namespace aoimf
