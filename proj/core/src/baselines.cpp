#include "aoimf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "aoimf/rng.hpp"

namespace aoimf {

namespace {
constexpr double kEnergyEps = 1e-9;
}

RandomizedBaseline randomized_lp(const SuccessTable& table, double c,
                                 const PopulationConfig& pop) {
  pop.validate();
  const double max_e = table.max_energy();
  if (c < -kEnergyEps || c > max_e + kEnergyEps)
    throw std::invalid_argument("randomized_lp: energy level outside [0, max energy]");
  c = std::clamp(c, 0.0, max_e);

  RandomizedBaseline out;
  out.c = c;
  out.lambda = (pop.n_devices - 1) * c / (pop.frame_time * pop.pools);

  const int k = static_cast<int>(table.actions.size());
  std::vector<double> p(k), e(k);
  for (int i = 0; i < k; ++i) {
    p[i] = success_prob(table, table.actions[i], out.lambda);
    e[i] = table.actions[i].energy();
  }

  double best_value = -1.0;
  std::vector<double> best_mix(k, 0.0);
  // Singleton supports: feasible when E(a) == c.
  for (int i = 0; i < k; ++i) {
    if (std::abs(e[i] - c) > kEnergyEps) continue;
    if (p[i] > best_value) {
      best_value = p[i];
      std::fill(best_mix.begin(), best_mix.end(), 0.0);
      best_mix[i] = 1.0;
    }
  }
  // Two-point supports: r_i e_i + r_j e_j = c, r_i + r_j = 1.
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (std::abs(e[i] - e[j]) <= kEnergyEps) continue;
      const double r_i = (e[j] - c) / (e[j] - e[i]);
      if (r_i < -1e-12 || r_i > 1.0 + 1e-12) continue;
      const double ri = std::clamp(r_i, 0.0, 1.0);
      const double value = ri * p[i] + (1.0 - ri) * p[j];
      if (value > best_value) {
        best_value = value;
        std::fill(best_mix.begin(), best_mix.end(), 0.0);
        best_mix[i] = ri;
        best_mix[j] = 1.0 - ri;
      }
    }
  }
  if (best_value < 0.0)
    throw std::invalid_argument("randomized_lp: no feasible mix at this energy level");

  out.mix = std::move(best_mix);
  out.p_star = best_value;
  out.success_unreached = out.p_star <= 0.0;
  out.avg_aoi = out.success_unreached ? std::numeric_limits<double>::infinity()
                                      : 1.0 / out.p_star;
  return out;
}

double budget_from_load(double load, const PopulationConfig& pop) {
  pop.validate();
  return pop.pools * pop.frame_time * load / (pop.n_devices - 1);
}

IrsaBaseline irsa_baseline(double alpha, double budget, const SuccessTable& table,
                           const PopulationConfig& pop) {
  pop.validate();
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("irsa_baseline: alpha must be in (0,1)");

  IrsaBaseline out;
  out.alpha = alpha;
  out.budget = budget;
  const double mean_degree = 2.0 - alpha;
  out.feasible = budget >= 0.0 && budget <= mean_degree;
  if (!out.feasible) return out;

  out.theta = budget / mean_degree;
  out.prob_idle = 1.0 - out.theta;
  out.prob_single = out.theta * alpha;
  out.prob_double = out.theta * (1.0 - alpha);
  out.lambda = (pop.n_devices - 1) * budget / (pop.pools * pop.frame_time);
  const double p_single = success_prob(table, {1, 1}, out.lambda);
  const double p_double = success_prob(table, {2, 1}, out.lambda);
  out.p_success = out.theta * (alpha * p_single + (1.0 - alpha) * p_double);
  out.avg_aoi = out.p_success > 0.0 ? 1.0 / out.p_success
                                    : std::numeric_limits<double>::infinity();
  return out;
}

ChainSimResult baseline_aoi_simulation_check(const std::vector<double>& mix,
                                             const SuccessTable& table,
                                             const PopulationConfig& pop, long frames,
                                             std::uint64_t seed, int delta_max) {
  pop.validate();
  if (frames < 10000)
    throw std::invalid_argument("baseline_aoi_simulation_check: frames must be >= 1e4");
  if (mix.size() != table.actions.size())
    throw std::invalid_argument("baseline_aoi_simulation_check: mix size != action count");
  double total = 0.0, energy = 0.0;
  for (std::size_t i = 0; i < mix.size(); ++i) {
    if (mix[i] < -1e-12)
      throw std::invalid_argument("baseline_aoi_simulation_check: negative mix entry");
    total += mix[i];
    energy += mix[i] * table.actions[i].energy();
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("baseline_aoi_simulation_check: mix must sum to 1");

  ChainSimResult out;
  out.frames = frames;
  const double lambda = (pop.n_devices - 1) * energy / (pop.frame_time * pop.pools);
  for (std::size_t i = 0; i < mix.size(); ++i)
    out.aggregate_p += mix[i] * success_prob(table, table.actions[i], lambda);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n_batches = 100;
  const long batch_len = frames / n_batches;
  std::vector<double> batch_mean;
  batch_mean.reserve(n_batches);

  long delta = 1;
  double grand_sum = 0.0;
  double batch_sum = 0.0;
  long in_batch = 0;
  for (long f = 0; f < frames; ++f) {
    grand_sum += static_cast<double>(delta);
    batch_sum += static_cast<double>(delta);
    if (++in_batch == batch_len && static_cast<long>(batch_mean.size()) < n_batches) {
      batch_mean.push_back(batch_sum / batch_len);
      batch_sum = 0.0;
      in_batch = 0;
    }
    const bool success = unif(rng) < out.aggregate_p;
    delta = success ? 1 : std::min<long>(delta + 1, delta_max);
  }
  out.mean_aoi = grand_sum / frames;

  double mean_of_means = 0.0;
  for (double b : batch_mean) mean_of_means += b;
  mean_of_means /= batch_mean.size();
  double var = 0.0;
  for (double b : batch_mean) var += (b - mean_of_means) * (b - mean_of_means);
  var /= (batch_mean.size() - 1);
  out.std_error = std::sqrt(var / batch_mean.size());
  return out;
}

}  // namespace aoimf
