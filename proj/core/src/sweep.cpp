#include "aoimf/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "aoimf/detail/parallel.hpp"
#include "aoimf/errors.hpp"

namespace aoimf {

std::vector<double> log_grid(double lo, double hi, int points) {
  if (lo <= 0.0 || hi <= lo || points < 2)
    throw std::invalid_argument("log_grid: need 0 < lo < hi and points >= 2");
  std::vector<double> grid(points);
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = lo * std::exp(step * i);
  grid.back() = hi;
  return grid;
}

std::vector<SweepRecord> sweep_eta(const std::vector<double>& eta_grid,
                                   const SuccessTable& table, const PopulationConfig& pop,
                                   const FixedPointConfig& fp, int delta_max,
                                   std::vector<Equilibrium>* equilibria, int n_threads) {
  if (eta_grid.empty()) throw std::invalid_argument("sweep_eta: empty eta grid");
  for (std::size_t i = 1; i < eta_grid.size(); ++i)
    if (eta_grid[i] <= eta_grid[i - 1])
      throw std::invalid_argument("sweep_eta: eta grid must be strictly increasing");

  std::vector<SweepRecord> records(eta_grid.size());
  std::vector<Equilibrium> eqs(eta_grid.size());
  detail::parallel_for(eta_grid.size(), n_threads, [&](std::size_t i) {
    SweepRecord& rec = records[i];
    rec.eta = eta_grid[i];
    try {
      Equilibrium eq = solve_equilibrium(eta_grid[i], table, pop, fp, delta_max);
      rec.lambda_star = eq.lambda_star;
      rec.avg_aoi = eq.avg_aoi;
      rec.avg_energy = eq.avg_energy;
      rec.rho = eq.rho;
      rec.converged = eq.converged;
      for (std::size_t s = 1; s < eq.policy.size(); ++s)
        if (!(eq.policy[s] == eq.policy[s - 1]))
          rec.policy_switch_points.push_back(static_cast<int>(s) + 1);
      eqs[i] = std::move(eq);
    } catch (const convergence_error&) {
      rec.converged = false;  // value iteration blew its budget at this point
    }
  });
  if (equilibria != nullptr) *equilibria = std::move(eqs);
  return records;
}

}  // namespace aoimf
