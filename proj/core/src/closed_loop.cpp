#include "aoimf/closed_loop.hpp"

#include <algorithm>
#include <stdexcept>

#include "aoimf/phy.hpp"
#include "aoimf/rng.hpp"

namespace aoimf {

ClosedLoopResult closed_loop_simulate(const std::vector<Action>& policy,
                                      const SystemConfig& cfg, long frames, long warmup,
                                      std::uint64_t seed) {
  cfg.validate();
  if (static_cast<int>(policy.size()) != cfg.delta_max)
    throw std::invalid_argument("closed_loop_simulate: policy must cover 1..delta_max");
  if (warmup < 0 || frames <= warmup)
    throw std::invalid_argument("closed_loop_simulate: need frames > warmup >= 0");

  const int n = cfg.n_devices;
  std::vector<int> aoi(n, 1);
  std::vector<double> aoi_sum(n, 0.0);
  double energy_sum = 0.0;
  std::vector<Replica> replicas;
  std::vector<Replica> pool_replicas;
  std::vector<char> delivered(n, 0);

  for (long frame = 0; frame < frames; ++frame) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(frame)));
    replicas.clear();
    const bool counting = frame >= warmup;
    for (int dev = 0; dev < n; ++dev) {
      const Action a = policy[aoi[dev] - 1];
      if (counting) {
        aoi_sum[dev] += aoi[dev];
        energy_sum += a.energy();
      }
      if (a.idle()) continue;
      const auto placed = place_tagged_replicas(a, cfg, rng, dev);
      replicas.insert(replicas.end(), placed.begin(), placed.end());
    }

    std::fill(delivered.begin(), delivered.end(), 0);
    if (cfg.cross_pool_cancel) {
      for (std::int64_t pid : detail::run_sic_cross_pool(replicas, cfg))
        delivered[static_cast<int>(pid)] = 1;
    } else {
      for (int pool = 0; pool < cfg.pools; ++pool) {
        pool_replicas.clear();
        for (const Replica& r : replicas)
          if (r.pool == pool) pool_replicas.push_back(r);
        if (pool_replicas.empty()) continue;
        for (std::int64_t pid : run_sic_pool(pool_replicas, cfg).decoded_packets)
          delivered[static_cast<int>(pid)] = 1;
      }
    }

    for (int dev = 0; dev < n; ++dev)
      aoi[dev] = delivered[dev] ? 1 : std::min(aoi[dev] + 1, cfg.delta_max);
  }

  ClosedLoopResult out;
  out.frames = frames;
  out.warmup = warmup;
  out.seed = seed;
  const double counted = static_cast<double>(frames - warmup);
  out.per_device_aoi.resize(n);
  for (int dev = 0; dev < n; ++dev) {
    out.per_device_aoi[dev] = aoi_sum[dev] / counted;
    out.mean_aoi += out.per_device_aoi[dev];
  }
  out.mean_aoi /= n;
  out.mean_energy = energy_sum / (counted * n);
  return out;
}

}  // namespace aoimf
