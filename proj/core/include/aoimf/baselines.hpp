#pragma once

#include <cstdint>
#include <vector>

#include "aoimf/mean_field.hpp"
#include "aoimf/success_table.hpp"

namespace aoimf {

/// Best age-independent randomized policy at a fixed average energy level.
struct RandomizedBaseline {
  double c = 0.0;               // average replica budget
  std::vector<double> mix;      // probability per table action
  double lambda = 0.0;          // induced per-pool load (N-1) c / (T_f R)
  double p_star = 0.0;          // achieved average success probability
  double avg_aoi = 0.0;         // 1/p_star; +inf when success is unreachable
  bool success_unreached = false;
};

/// Solve max_r sum r_i p_hat(a_i; Lambda(c)) s.t. sum r_i E(a_i) = c,
/// sum r_i = 1, r >= 0 by enumerating all supports of size <= 2 (every basic
/// feasible solution of the two-constraint LP has at most two positive
/// components). Throws std::invalid_argument when c is outside [0, max E].
RandomizedBaseline randomized_lp(const SuccessTable& table, double c,
                                 const PopulationConfig& pop);

/// IRSA-inspired age-independent baseline: active devices draw degree 1 with
/// probability alpha and degree 2 otherwise (single pool), mixed with idle to
/// hit the average replica budget exactly.
struct IrsaBaseline {
  double alpha = 0.0;   // degree-distribution parameter, in (0,1)
  double budget = 0.0;  // target average energy B
  bool feasible = false;  // requires 0 <= B <= 2 - alpha
  double theta = 0.0;     // activity probability B / (2 - alpha)
  double prob_idle = 0.0;
  double prob_single = 0.0;  // action (1,1)
  double prob_double = 0.0;  // action (2,1)
  double lambda = 0.0;
  double p_success = 0.0;
  double avg_aoi = 0.0;  // 1/p; +inf when p == 0
};

IrsaBaseline irsa_baseline(double alpha, double budget, const SuccessTable& table,
                           const PopulationConfig& pop);

/// Average replica budget matching a per-pool load: B = R T_f G / (N-1).
double budget_from_load(double load, const PopulationConfig& pop);

/// Empirical time-average AoI of the single-device Bernoulli reset chain
/// under an age-independent action mix, with the aggregate success
/// probability implied by the mix's own induced load.
struct ChainSimResult {
  double mean_aoi = 0.0;
  double std_error = 0.0;  // batch-means standard error of mean_aoi
  double aggregate_p = 0.0;
  long frames = 0;
};

ChainSimResult baseline_aoi_simulation_check(const std::vector<double>& mix,
                                             const SuccessTable& table,
                                             const PopulationConfig& pop, long frames,
                                             std::uint64_t seed, int delta_max);

}  // namespace aoimf
