#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aoimf/action.hpp"
#include "aoimf/system_config.hpp"

namespace aoimf {

/// Calibrated frame-level success law p_hat(a; Lambda) as a Monte Carlo
/// lookup table over the action set and an ascending load grid.
struct SuccessTable {
  std::vector<double> load_grid;           // strictly increasing, >= 0
  std::vector<Action> actions;             // idle first
  std::vector<std::vector<double>> p_hat;  // [action][grid point]
  long trials = 0;                         // Monte Carlo trials per cell
  std::uint64_t seed = 0;                  // master seed used for calibration
  std::string cfg_digest;                  // hex digest of the SystemConfig

  /// Index of `a` in `actions`, or -1 if absent.
  [[nodiscard]] int action_index(Action a) const;
  [[nodiscard]] double max_energy() const;
};

/// Default calibration grid {0, step, 2*step, ..., <= load_max}.
std::vector<double> default_load_grid(double load_max = 24.0, double step = 2.0);

/// Monte Carlo calibration: for every non-idle action and grid load, the
/// fraction of `trials` independent frames in which the tagged packet is
/// delivered. The idle row is exactly zero. Cells are seeded independently
/// from the master seed, so the result is byte-identical for any thread
/// count (n_threads <= 0 uses hardware concurrency).
SuccessTable calibrate_table(const SystemConfig& cfg, std::vector<double> load_grid,
                             long trials, std::uint64_t seed, int n_threads = 0);

/// p_hat(a; lambda) with piecewise-linear interpolation on the grid; loads
/// outside the grid clamp to the endpoint value. The idle action returns 0.
/// Throws std::invalid_argument for an action not in the table.
double success_prob(const SuccessTable& table, Action action, double lambda);

/// Plain-text CSV: comment preamble, header `lambda,d,q,p_hat,trials`, one
/// row per (grid point, action). Probabilities round-trip bit-exactly.
void save_table(const SuccessTable& table, const std::filesystem::path& path);
SuccessTable load_table(const std::filesystem::path& path);

/// True when the table was calibrated under `cfg` (digest match).
bool digest_matches(const SuccessTable& table, const SystemConfig& cfg);

/// Grid-adjacent increases of p_hat beyond the statistical slack
/// 3*sqrt(1/trials); empty when the table shows the expected congestion
/// monotonicity.
struct MonotonicityViolation {
  Action action;
  int grid_index;  // p_hat[action][grid_index+1] > p_hat[action][grid_index] + slack
  double increase;
};
std::vector<MonotonicityViolation> congestion_monotonicity_violations(const SuccessTable& table);

/// For every transposed pair (d,q)/(q,d) with equal energy, how often the
/// pool-diverse variant wins across the grid (recorded, not asserted).
struct DiversityComparison {
  Action diverse;      // q > d
  Action repetition;   // the transposed action
  std::vector<bool> diverse_wins;  // per grid point: p_hat(diverse) > p_hat(repetition)
};
std::vector<DiversityComparison> diversity_dominance_report(const SuccessTable& table);

}  // namespace aoimf
