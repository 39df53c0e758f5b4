// Acceptance suite: exercises every top-level requirement end to end and
// prints one pass/fail line per criterion. Returns nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aoimf/baselines.hpp"
#include "aoimf/closed_loop.hpp"
#include "aoimf/mean_field.hpp"
#include "aoimf/occupation_lp.hpp"
#include "aoimf/rng.hpp"
#include "aoimf/success_table.hpp"
#include "aoimf/sweep.hpp"
#include "aoimf/verify.hpp"

using namespace aoimf;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 20260810;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

SystemConfig base_config(double noise, bool fading) {
  SystemConfig cfg;
  cfg.n_devices = 30;
  cfg.pools = 3;
  cfg.slots = 3;
  cfg.frame_time = 1.0;
  cfg.packet_time = 0.25;
  cfg.noise_power = noise;
  cfg.sinr_threshold = 2.0;
  cfg.residual_factor = 0.05;
  cfg.rician_k = fading ? 10.0 : -1.0;
  cfg.rx_power = 1.0;
  cfg.max_reps = 3;
  cfg.delta_max = 200;
  return cfg;
}

PopulationConfig population() { return {30, 3, 1.0}; }

struct Outcome {
  bool pass;
  std::string detail;
};

// 1. RVI average cost equals the occupation-measure LP optimum on randomized
//    small models, in under 10 seconds.
Outcome criterion_1() {
  const auto start = Clock::now();
  std::mt19937_64 rng(derive_seed(kSeed, 1));
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const MdpModel model = make_random_model(rng, 20, i);
    const MdpSolution rvi = relative_value_iteration(model);
    const OccupationSolution lp = occupation_lp_solve(model);
    worst = std::max(worst, std::abs(rvi.rho - lp.rho));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-6 && elapsed < 10.0,
          "max |rho_rvi - rho_lp| = " + fmt(worst) + " over 25 models, " + fmt(elapsed) + " s"};
}

// 2. Geometric-chain ground truth: p = 0.5, eta = 0, delta_max = 200.
Outcome criterion_2() {
  MdpModel model;
  model.delta_max = 200;
  model.actions = {{1, 1}};
  model.p = {0.5};
  model.eta = 0.0;
  const MdpSolution sol = relative_value_iteration(model);
  const double rho_gap = std::abs(sol.rho - 2.0);

  const StationaryResult stat = stationary_distribution(std::vector<double>(200, 0.5));
  double mean = 0.0;
  for (int s = 0; s < 200; ++s) mean += stat.m[s] * (s + 1);
  // Closed form: p sum_{d=1}^{n-1} d (1-p)^(d-1) + n (1-p)^(n-1), with the
  // head sum evaluated analytically.
  const double p = 0.5;
  const int n = 200;
  const double x = 1.0 - p;
  const int k = n - 1;
  const double head =
      (1.0 - (k + 1) * std::pow(x, k) + k * std::pow(x, k + 1)) / ((1.0 - x) * (1.0 - x));
  const double closed = p * head + n * std::pow(x, n - 1);
  const double mean_gap = std::abs(mean - closed);
  return {rho_gap <= 1e-6 && mean_gap <= 1e-9,
          "|rho - 2| = " + fmt(rho_gap) + ", |stationary mean - closed form| = " + fmt(mean_gap)};
}

// 3. Structure properties on 50 random dominance-filtered models.
Outcome criterion_3() {
  std::mt19937_64 rng(derive_seed(kSeed, 3));
  int h_fail = 0, order_fail = 0, dominance_fail = 0;
  for (int i = 0; i < 50; ++i) {
    const MdpModel model = make_random_model(rng, 40, i);
    const MdpSolution sol = relative_value_iteration(model);
    const StructureReport rep = extract_structure(model, sol);
    if (!rep.h_nondecreasing) ++h_fail;

    const auto chain = filter_dominated(model.actions, model.p);
    int prev = -1;
    bool order_ok = true, dominance_ok = true;
    for (int s = 0; s < model.delta_max; ++s) {
      int pos = -1;
      for (std::size_t c = 0; c < chain.size(); ++c)
        if (chain[c].index == sol.policy[s]) pos = static_cast<int>(c);
      if (pos < 0) dominance_ok = false;
      if (pos >= 0 && pos < prev) order_ok = false;
      if (pos >= 0) prev = pos;
    }
    if (!order_ok) ++order_fail;
    if (!dominance_ok) ++dominance_fail;
  }
  return {h_fail == 0 && order_fail == 0 && dominance_fail == 0,
          "violations over 50 models: h=" + std::to_string(h_fail) +
              " threshold_order=" + std::to_string(order_fail) +
              " dominance=" + std::to_string(dominance_fail)};
}

// 4. PHY sanity at calibration scale on the fading-disabled table.
Outcome criterion_4(const SuccessTable& table, double calibration_seconds) {
  const int idx = table.action_index({1, 1});
  const bool exact_one = table.p_hat[idx][0] == 1.0;

  int monotone_violations = 0;
  for (std::size_t a = 0; a < table.actions.size(); ++a) {
    for (std::size_t g = 0; g + 1 < table.load_grid.size(); ++g) {
      const double pi = table.p_hat[a][g], pj = table.p_hat[a][g + 1];
      const double se =
          std::sqrt((pi * (1.0 - pi) + pj * (1.0 - pj)) / table.trials) + 1.0 / table.trials;
      if (pj - pi > 3.0 * se) ++monotone_violations;
    }
  }
  const bool ok =
      exact_one && monotone_violations == 0 && calibration_seconds < 120.0;
  return {ok, std::string("p(1,1;0) = ") + (exact_one ? "1.0 exactly" : "NOT 1.0") +
                  ", monotonicity violations = " + std::to_string(monotone_violations) +
                  ", calibration " + fmt(calibration_seconds) + " s"};
}

// 5. Fixed-point convergence across the eta sweep.
Outcome criterion_5(const std::vector<SweepRecord>& records) {
  int converged = 0;
  std::string failed;
  for (const SweepRecord& r : records) {
    if (r.converged) {
      ++converged;
    } else {
      if (!failed.empty()) failed += ",";
      failed += fmt(r.eta);
    }
  }
  std::string detail = std::to_string(converged) + "/" + std::to_string(records.size()) +
                       " points converged (load tol 1e-3, dist tol 1e-4, <= 500 outer iters)";
  if (!failed.empty()) detail += "; non-converged eta: " + failed;
  return {converged >= 18, detail};
}

// 6. Pareto dominance over the optimized age-agnostic randomized baseline at
//    matched energy, for both noise levels.
Outcome criterion_6(const std::vector<SweepRecord>& records, const SuccessTable& table,
                    const char* label) {
  const PopulationConfig pop = population();
  int compared = 0, beaten = 0;
  double worst_margin = 1e300;
  for (const SweepRecord& r : records) {
    if (!r.converged || r.avg_energy > 1.0) continue;
    ++compared;
    const RandomizedBaseline b = randomized_lp(table, r.avg_energy, pop);
    const double baseline_aoi = b.avg_aoi;  // +inf when success unreachable
    if (r.avg_aoi < baseline_aoi) ++beaten;
    if (std::isfinite(baseline_aoi))
      worst_margin = std::min(worst_margin, baseline_aoi - r.avg_aoi);
  }
  const bool ok = compared > 0 && beaten == compared;
  std::string detail = std::string(label) + ": " + std::to_string(beaten) + "/" +
                       std::to_string(compared) + " low-energy points strictly below baseline";
  if (compared > 0 && worst_margin < 1e300)
    detail += ", smallest margin " + fmt(worst_margin) + " frames";
  return {ok, detail};
}

// 7. Threshold staircase for two representative budgets.
Outcome criterion_7(const SuccessTable& table) {
  const PopulationConfig pop = population();
  const FixedPointConfig fp;
  const double eta_high = 5.0;  // tight budget
  const double eta_low = 0.5;   // loose budget
  const Equilibrium tight = solve_equilibrium(eta_high, table, pop, fp, 200);
  const Equilibrium loose = solve_equilibrium(eta_low, table, pop, fp, 200);

  auto energy_monotone = [](const Equilibrium& eq) {
    for (std::size_t s = 1; s < eq.policy.size(); ++s)
      if (eq.policy[s].energy() < eq.policy[s - 1].energy()) return false;
    return true;
  };
  auto first_switch = [](const Equilibrium& eq) {
    for (std::size_t s = 1; s < eq.policy.size(); ++s)
      if (!(eq.policy[s] == eq.policy[s - 1])) return static_cast<int>(s) + 1;
    return 0;  // no switch
  };

  const int sw_tight = first_switch(tight);
  const int sw_loose = first_switch(loose);
  const bool budgets_distinct = std::abs(tight.avg_energy - loose.avg_energy) > 1e-6;
  const bool ok = tight.converged && loose.converged && budgets_distinct &&
                  energy_monotone(tight) && energy_monotone(loose) && sw_tight > 0 &&
                  sw_loose > 0 && sw_tight > sw_loose;
  return {ok, "budgets (E=" + fmt(tight.avg_energy) + ", E=" + fmt(loose.avg_energy) +
                  "), first switches at delta " + std::to_string(sw_tight) + " vs " +
                  std::to_string(sw_loose) +
                  (budgets_distinct ? "" : " [budgets not distinct]") +
                  (energy_monotone(tight) && energy_monotone(loose)
                       ? ", energy nondecreasing in both"
                       : ", ENERGY NOT MONOTONE")};
}

// 8. IRSA energy matching and reset-chain simulation agreement.
Outcome criterion_8(const SuccessTable& table) {
  const PopulationConfig pop = population();
  double worst_energy_gap = 0.0;
  double worst_sigma = 0.0;
  int checks = 0;
  for (const double alpha : {0.5, 0.1, 0.9}) {
    for (int i = 0; i <= 5; ++i) {
      const double budget = (2.0 - alpha) * i / 5.0;
      const IrsaBaseline b = irsa_baseline(alpha, budget, table, pop);
      if (!b.feasible) return {false, "unexpected infeasible point"};
      const double energy = b.prob_single * 1.0 + b.prob_double * 2.0;
      worst_energy_gap = std::max(worst_energy_gap, std::abs(energy - budget));
      if (budget == 0.0 || b.p_success <= 0.0) continue;

      std::vector<double> mix(table.actions.size(), 0.0);
      mix[table.action_index({0, 0})] = b.prob_idle;
      mix[table.action_index({1, 1})] = b.prob_single;
      mix[table.action_index({2, 1})] = b.prob_double;
      const ChainSimResult sim = baseline_aoi_simulation_check(
          mix, table, pop, 1000000, derive_seed(kSeed, 8, checks), 200);
      const double sigmas = std::abs(sim.mean_aoi - 1.0 / b.p_success) /
                            std::max(sim.std_error, 1e-12);
      worst_sigma = std::max(worst_sigma, sigmas);
      ++checks;
    }
  }
  const bool ok = worst_energy_gap <= 1e-12 && worst_sigma <= 3.0;
  return {ok, "max |mix energy - B| = " + fmt(worst_energy_gap) + ", worst sim deviation " +
                  fmt(worst_sigma) + " standard errors over " + std::to_string(checks) +
                  " simulated points"};
}

// 9. Closed-loop consistency report for a converged equilibrium policy.
Outcome criterion_9(const SuccessTable& table, const SystemConfig& cfg) {
  const PopulationConfig pop = population();
  const FixedPointConfig fp;
  const Equilibrium eq = solve_equilibrium(0.5, table, pop, fp, cfg.delta_max);
  if (!eq.converged) return {false, "equilibrium at eta=0.5 did not converge"};

  ClosedLoopResult r = closed_loop_simulate(eq.policy, cfg, 50000, 5000, derive_seed(kSeed, 9));
  r.predicted_aoi = eq.avg_aoi;
  r.predicted_energy = eq.avg_energy;
  const double aoi_gap = std::abs(r.mean_aoi - eq.avg_aoi) / eq.avg_aoi;
  const double energy_gap =
      eq.avg_energy > 0.0 ? std::abs(r.mean_energy - eq.avg_energy) / eq.avg_energy : 0.0;
  std::ostringstream os;
  os << "mean-field (aoi " << fmt(eq.avg_aoi) << ", energy " << fmt(eq.avg_energy)
     << ") vs closed loop (aoi " << fmt(r.mean_aoi) << ", energy " << fmt(r.mean_energy)
     << "); relative gaps " << fmt(100.0 * aoi_gap) << "% / " << fmt(100.0 * energy_gap)
     << "%"
     << ((aoi_gap <= 0.15 && energy_gap <= 0.15) ? " (within the 15% reporting threshold)"
                                                 : " (EXCEEDS the 15% reporting threshold)");
  return {true, os.str()};  // reported validation: emitting the comparison is the criterion
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();
  const SystemConfig cfg_nofade = base_config(0.5, false);
  const SystemConfig cfg_main = base_config(0.5, true);
  const SystemConfig cfg_noisy = base_config(1.0, true);
  const PopulationConfig pop = population();
  const std::vector<double> grid = default_load_grid(24.0, 2.0);

  std::cout << "calibrating success tables (20000 trials/cell, 10 actions x " << grid.size()
            << " loads)...\n";
  auto t0 = Clock::now();
  const SuccessTable table_nofade = calibrate_table(cfg_nofade, grid, 20000, kSeed);
  const double cal_seconds = seconds_since(t0);
  std::cout << "  sigma2=0.5 fading off: " << fmt(cal_seconds) << " s\n";
  t0 = Clock::now();
  const SuccessTable table_main = calibrate_table(cfg_main, grid, 20000, kSeed + 1);
  std::cout << "  sigma2=0.5 K=10:      " << fmt(seconds_since(t0)) << " s\n";
  t0 = Clock::now();
  const SuccessTable table_noisy = calibrate_table(cfg_noisy, grid, 20000, kSeed + 2);
  std::cout << "  sigma2=1.0 K=10:      " << fmt(seconds_since(t0)) << " s\n";

  const FixedPointConfig fp;
  const std::vector<double> etas = log_grid(1e-3, 1e2, 20);
  t0 = Clock::now();
  const std::vector<SweepRecord> sweep_main = sweep_eta(etas, table_main, pop, fp, 200);
  const std::vector<SweepRecord> sweep_noisy = sweep_eta(etas, table_noisy, pop, fp, 200);
  std::cout << "eta sweeps (2 x 20 equilibria): " << fmt(seconds_since(t0)) << " s\n\n";

  struct Row {
    int id;
    const char* name;
    Outcome outcome;
  };
  const Row rows[] = {
      {1, "oracle equivalence (LP vs RVI)", criterion_1()},
      {2, "geometric-chain ground truth", criterion_2()},
      {3, "structure properties", criterion_3()},
      {4, "PHY sanity at calibration scale", criterion_4(table_nofade, cal_seconds)},
      {5, "fixed-point convergence", criterion_5(sweep_main)},
      {6, "Pareto dominance (sigma2=0.5)", criterion_6(sweep_main, table_main, "sigma2=0.5")},
      {6, "Pareto dominance (sigma2=1.0)", criterion_6(sweep_noisy, table_noisy, "sigma2=1.0")},
      {7, "threshold staircase", criterion_7(table_main)},
      {8, "IRSA energy matching", criterion_8(table_main)},
      {9, "closed-loop consistency report", criterion_9(table_main, cfg_main)},
  };

  int failures = 0;
  for (const Row& row : rows) {
    std::cout << (row.outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << row.id << " ("
              << row.name << "): " << row.outcome.detail << "\n";
    if (!row.outcome.pass) ++failures;
  }
  std::cout << "\ntotal runtime " << fmt(seconds_since(suite_start)) << " s, " << failures
            << " failing criteria\n";
  return failures == 0 ? 0 : 1;
}
