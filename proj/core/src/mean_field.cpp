#include "aoimf/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aoimf/errors.hpp"

namespace aoimf {

void PopulationConfig::validate() const {
  if (n_devices < 2) throw config_error("PopulationConfig: n_devices must be >= 2");
  if (pools < 1) throw config_error("PopulationConfig: pools must be >= 1");
  if (frame_time <= 0.0) throw config_error("PopulationConfig: frame_time must be > 0");
}

double induced_load(const std::vector<double>& m, const std::vector<Action>& policy,
                    const PopulationConfig& pop) {
  pop.validate();
  if (m.size() != policy.size())
    throw std::invalid_argument("induced_load: |m| != |policy|");
  double expected_replicas = 0.0;
  for (std::size_t s = 0; s < m.size(); ++s)
    expected_replicas += m[s] * policy[s].energy();
  return (pop.n_devices - 1) * expected_replicas / (pop.frame_time * pop.pools);
}

double induced_load(const std::vector<double>& m,
                    const std::vector<std::vector<double>>& policy,
                    const std::vector<Action>& actions, const PopulationConfig& pop) {
  pop.validate();
  if (m.size() != policy.size())
    throw std::invalid_argument("induced_load: |m| != |policy|");
  double expected_replicas = 0.0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    double e = 0.0;
    for (std::size_t a = 0; a < actions.size(); ++a)
      e += policy[s][a] * actions[a].energy();
    expected_replicas += m[s] * e;
  }
  return (pop.n_devices - 1) * expected_replicas / (pop.frame_time * pop.pools);
}

StationaryResult stationary_distribution(const std::vector<double>& p_by_state) {
  const int n = static_cast<int>(p_by_state.size());
  if (n < 2) throw std::invalid_argument("stationary_distribution: need >= 2 states");
  StationaryResult out;
  out.m.assign(n, 0.0);

  // Survivor mass entering each state: S(1) = 1, S(delta) = prod_{k<delta}(1-p(k)).
  std::vector<double> survive(n, 0.0);
  survive[0] = 1.0;
  for (int s = 1; s < n; ++s) survive[s] = survive[s - 1] * (1.0 - p_by_state[s - 1]);

  const double p_last = p_by_state[n - 1];
  if (p_last <= 0.0 && survive[n - 1] > 0.0) {
    // The truncation state is reachable and absorbing.
    out.m[n - 1] = 1.0;
    out.degenerate = true;
    return out;
  }
  double total = 0.0;
  for (int s = 0; s + 1 < n; ++s) {
    out.m[s] = survive[s];
    total += survive[s];
  }
  out.m[n - 1] = p_last > 0.0 ? survive[n - 1] / p_last : 0.0;
  total += out.m[n - 1];
  for (double& v : out.m) v /= total;
  return out;
}

StationaryResult stationary_distribution(const std::vector<Action>& policy, double lambda,
                                         const SuccessTable& table, int delta_max) {
  if (static_cast<int>(policy.size()) != delta_max)
    throw std::invalid_argument("stationary_distribution: policy must cover 1..delta_max");
  std::vector<double> p(delta_max);
  for (int s = 0; s < delta_max; ++s) p[s] = success_prob(table, policy[s], lambda);
  return stationary_distribution(p);
}

namespace {

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

std::vector<double> policy_success(const MdpModel& model, const std::vector<int>& policy) {
  std::vector<double> p(policy.size());
  for (std::size_t s = 0; s < policy.size(); ++s) p[s] = model.p[policy[s]];
  return p;
}

}  // namespace

Equilibrium solve_equilibrium(double eta, const SuccessTable& table,
                              const PopulationConfig& pop, const FixedPointConfig& fp,
                              int delta_max) {
  pop.validate();
  if (eta < 0.0) throw config_error("solve_equilibrium: eta must be >= 0");
  if (fp.tol_load <= 0.0 || fp.tol_dist <= 0.0)
    throw config_error("solve_equilibrium: tolerances must be > 0");
  if (fp.damp_load <= 0.0 || fp.damp_load > 1.0 || fp.damp_dist <= 0.0 || fp.damp_dist > 1.0)
    throw config_error("solve_equilibrium: damping factors must be in (0,1]");

  double lambda = fp.lambda_init;
  std::vector<double> m = fp.m_init;
  if (m.empty()) {
    m.assign(delta_max, 1.0 / delta_max);
  } else if (static_cast<int>(m.size()) != delta_max) {
    throw config_error("solve_equilibrium: m_init size != delta_max");
  }

  Equilibrium best;
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<double> warm;

  for (int iter = 1; iter <= fp.max_outer_iters; ++iter) {
    const MdpModel model = build_model(table, lambda, eta, delta_max);
    const MdpSolution sol =
        relative_value_iteration(model, fp.rvi, warm.empty() ? nullptr : &warm);
    warm = sol.v;
    const std::vector<Action> policy = sol.policy_actions(model);

    const double lambda_induced = induced_load(m, policy, pop);
    const StationaryResult stat = stationary_distribution(policy_success(model, sol.policy));
    const double r_load = std::abs(lambda_induced - lambda);
    const double r_dist = l1_distance(m, stat.m);

    Equilibrium current;
    current.policy = policy;
    current.m = m;
    current.lambda_star = lambda;
    current.rho = sol.rho;
    current.outer_iters = iter;
    current.load_residual = r_load;
    current.dist_residual = r_dist;
    current.degenerate = sol.degenerate || stat.degenerate;
    current.v = sol.v;
    current.avg_aoi = 0.0;
    current.avg_energy = 0.0;
    for (int s = 0; s < delta_max; ++s) {
      current.avg_aoi += m[s] * (s + 1);
      current.avg_energy += m[s] * policy[s].energy();
    }

    const double score = std::max(r_load / fp.tol_load, r_dist / fp.tol_dist);
    if (score < best_score) {
      best_score = score;
      best = current;
    }
    if (r_load <= fp.tol_load && r_dist <= fp.tol_dist) {
      current.converged = true;
      return current;
    }

    // Damped load update, then damped population update at the new load.
    lambda = (1.0 - fp.damp_load) * lambda + fp.damp_load * lambda_induced;
    std::vector<double> p_new(delta_max);
    for (int s = 0; s < delta_max; ++s) p_new[s] = success_prob(table, policy[s], lambda);
    const StationaryResult stat_new = stationary_distribution(p_new);
    for (int s = 0; s < delta_max; ++s)
      m[s] = (1.0 - fp.damp_dist) * m[s] + fp.damp_dist * stat_new.m[s];
  }

  best.converged = false;
  return best;
}

std::pair<double, double> equilibrium_metrics(const Equilibrium& eq) {
  double aoi = 0.0, energy = 0.0;
  for (std::size_t s = 0; s < eq.m.size(); ++s) {
    aoi += eq.m[s] * static_cast<double>(s + 1);
    energy += eq.m[s] * eq.policy[s].energy();
  }
  return {aoi, energy};
}

}  // namespace aoimf
