#pragma once

#include <vector>

#include "aoimf/action.hpp"
#include "aoimf/success_table.hpp"

namespace aoimf {

/// Finite average-cost MDP for a representative device under a fixed load.
/// States are AoI values 1..delta_max (stored 0-based). From state delta,
/// action a resets to 1 with probability p[a] and otherwise moves to
/// min(delta+1, delta_max). Stage cost: delta + eta * energy(a) + cost_offset.
struct MdpModel {
  int delta_max = 2;
  std::vector<Action> actions;
  std::vector<double> p;  // success probability per action at the fixed load
  double eta = 0.0;
  double cost_offset = 0.0;

  [[nodiscard]] double stage_cost(int delta, int action_idx) const {
    return delta + eta * actions[action_idx].energy() + cost_offset;
  }
  [[nodiscard]] int next_on_failure(int delta) const {
    return delta + 1 < delta_max ? delta + 1 : delta_max;
  }
  void validate() const;  // throws config_error
};

/// Model at load `lambda` with success probabilities interpolated from the
/// calibrated table.
MdpModel build_model(const SuccessTable& table, double lambda, double eta, int delta_max);

struct RviOptions {
  double tol = 1e-9;        // span-seminorm stopping threshold
  long max_iters = 1000000;
  int reference_state = 1;  // V(reference_state) is pinned to 0
  double damping = 0.5;     // aperiodicity mixing weight on the identity kernel
};

/// Solution of the average-cost Bellman equation.
struct MdpSolution {
  double rho = 0.0;                          // average cost
  std::vector<double> v;                     // relative values, v[delta-1]
  std::vector<int> policy;                   // chosen action index per state
  std::vector<std::vector<double>> q_values; // [state][action]
  long iterations = 0;
  double residual = 0.0;  // max_delta |rho + V(delta) - min_a Q(delta,a)|
  bool degenerate = false;  // no action has positive success probability

  [[nodiscard]] std::vector<Action> policy_actions(const MdpModel& model) const;
};

/// Relative value iteration with reference-state normalization.
///
/// Iterates on the aperiodicity-transformed kernel tau*I + (1-tau)*P, which
/// has the same average cost, the same optimal policy, and relative values
/// scaled by 1/(1-tau); the returned V is rescaled to the original model.
/// Argmin ties break by lowest energy, then lowest d, then lowest q.
/// Throws convergence_error when max_iters is exhausted. A model where every
/// action has zero success probability converges to absorption at delta_max;
/// for it the closed-form solution is returned with `degenerate` set.
MdpSolution relative_value_iteration(const MdpModel& model, const RviOptions& opts = {},
                                     const std::vector<double>* warm_start = nullptr);

/// One link of the dominance-filtered action chain.
struct EffectiveAction {
  Action action;
  double p;
  int index;  // position in the original action list
};

/// Remove every action for which some other action has energy <= and success
/// probability >= with at least one strict inequality; among exact (E, p)
/// duplicates the lexicographically smallest (d, q) survives. Survivors are
/// returned sorted by energy and have strictly increasing energy and success.
std::vector<EffectiveAction> filter_dominated(const std::vector<Action>& actions,
                                              const std::vector<double>& p);

/// Crossing point H = eta*(E_hi - E_lo)/(p_hi - p_lo) of the per-state action
/// objectives g_a(h) = eta*E(a) - p_a*h; the higher-energy action is weakly
/// preferred exactly when h >= H. Requires E_hi > E_lo and p_hi > p_lo.
double pairwise_threshold(Action lo, double p_lo, Action hi, double p_hi, double eta);

/// Structural facts extracted from a converged solution.
struct StructureReport {
  bool h_nondecreasing = false;
  int first_h_violation = -1;        // state delta with h(delta) > h(delta+1), or -1
  std::vector<int> switch_points;    // delta values where the policy changes
  bool energy_nondecreasing = false; // E(pi(delta)) nondecreasing in delta
  bool argmin_consistent = false;    // policy == argmin_a {eta E(a) - p_a h(delta)} everywhere
};

StructureReport extract_structure(const MdpModel& model, const MdpSolution& solution);

/// h(delta) = V(min(delta+1, delta_max)) - V(1) for delta = 1..delta_max.
std::vector<double> relative_value_gaps(const MdpModel& model, const MdpSolution& solution);

}  // namespace aoimf
