#include "aoimf/phy.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "aoimf/rng.hpp"

namespace aoimf {

bool DecodeResult::contains(std::int64_t packet_id) const {
  return std::binary_search(decoded_packets.begin(), decoded_packets.end(), packet_id);
}

namespace {

/// First k elements of a uniform random permutation of 0..n-1.
std::vector<int> sample_without_replacement(int n, int k, std::mt19937_64& rng) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

double sample_power(const SystemConfig& cfg, std::mt19937_64& rng) {
  if (!cfg.fading_enabled()) return cfg.rx_power;
  return cfg.rx_power * rician_power_coeff(cfg.rician_k, rng);
}

/// SIC to exhaustion over the replicas selected by `idx`, honoring existing
/// residual/decoded state. Appends decoded packet ids to `decoded` and
/// returns the number of decode steps performed.
int sic_exhaust(std::vector<Replica>& replicas, const std::vector<int>& idx,
                const SystemConfig& cfg, std::unordered_set<std::int64_t>& decoded,
                std::vector<std::int64_t>& newly_decoded, SicTrace* trace) {
  const int n = static_cast<int>(idx.size());
  if (n == 0) return 0;

  // contribution[i*n + j]: interference replica idx[j] adds to idx[i] while
  // its residual factor is 1.
  std::vector<double> contribution(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> interference(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const Replica& u = replicas[idx[i]];
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Replica& v = replicas[idx[j]];
      const double l = overlap_length(u.start, v.start, cfg.packet_time);
      if (l <= 0.0) continue;
      const double w = v.power * l / cfg.packet_time;
      contribution[static_cast<std::size_t>(i) * n + j] = w;
      interference[i] += w * v.residual;
    }
  }

  auto sinr_of = [&](int i) {
    const double inter = interference[i] > 0.0 ? interference[i] : 0.0;
    return replicas[idx[i]].power / (cfg.noise_power + inter);
  };

  int steps = 0;
  while (steps < cfg.sic_max_iters) {
    int best = -1;
    for (int i = 0; i < n; ++i) {
      const Replica& u = replicas[idx[i]];
      if (decoded.count(u.packet_id)) continue;
      if (sinr_of(i) < cfg.sinr_threshold) continue;
      if (best < 0 || u.power > replicas[idx[best]].power ||
          (u.power == replicas[idx[best]].power &&
           u.packet_id < replicas[idx[best]].packet_id)) {
        best = i;
      }
    }
    if (best < 0) break;

    if (trace != nullptr) {
      SicTrace::Step step;
      step.decoded_packet = replicas[idx[best]].packet_id;
      step.sinr = sinr_of(best);
      step.all_sinr.resize(n);
      for (int i = 0; i < n; ++i) step.all_sinr[i] = sinr_of(i);
      trace->steps.push_back(std::move(step));
    }

    const std::int64_t pid = replicas[idx[best]].packet_id;
    decoded.insert(pid);
    newly_decoded.push_back(pid);
    replicas[idx[best]].decoded = true;
    ++steps;

    // Cancel every replica of the decoded packet in this pool.
    const double eps = cfg.residual_factor;
    for (int j = 0; j < n; ++j) {
      Replica& v = replicas[idx[j]];
      if (v.packet_id != pid || v.residual != 1.0) continue;
      v.residual = eps;
      const double drop = 1.0 - eps;
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        interference[i] -= contribution[static_cast<std::size_t>(i) * n + j] * drop;
      }
    }
  }
  return steps;
}

}  // namespace

std::vector<Replica> place_tagged_replicas(Action action, const SystemConfig& cfg,
                                           std::mt19937_64& rng, std::int64_t packet_id) {
  if (action.idle()) throw std::invalid_argument("place_tagged_replicas: idle action");
  if (action.d > cfg.slots)
    throw std::invalid_argument("place_tagged_replicas: d exceeds slots per pool");
  if (action.q > cfg.pools)
    throw std::invalid_argument("place_tagged_replicas: q exceeds pool count");

  const double slot_time = cfg.slot_time();
  std::uniform_real_distribution<double> offset_dist(0.0, slot_time);

  std::vector<Replica> out;
  out.reserve(static_cast<std::size_t>(action.d) * action.q);
  const std::vector<int> pools = sample_without_replacement(cfg.pools, action.q, rng);
  for (int pool : pools) {
    const std::vector<int> slots = sample_without_replacement(cfg.slots, action.d, rng);
    for (int slot : slots) {
      Replica r;
      r.packet_id = packet_id;
      r.pool = pool;
      r.slot = slot;
      r.offset = offset_dist(rng);
      r.start = slot * slot_time + r.offset;
      r.power = sample_power(cfg, rng);
      out.push_back(r);
    }
  }
  return out;
}

namespace detail {

void append_pool_background(double lambda, const SystemConfig& cfg, int pool,
                            std::uint64_t pool_seed, std::int64_t base_packet_id,
                            std::vector<Replica>& out) {
  if (lambda <= 0.0) return;
  std::mt19937_64 rng(pool_seed);
  std::poisson_distribution<int> count_dist(lambda * cfg.frame_time);
  const int count = count_dist(rng);
  if (count <= 0) return;

  const double slot_time = cfg.slot_time();
  std::uniform_int_distribution<int> slot_dist(0, cfg.slots - 1);
  std::uniform_real_distribution<double> offset_dist(0.0, slot_time);
  out.reserve(out.size() + count);
  for (int i = 0; i < count; ++i) {
    Replica r;
    r.packet_id = base_packet_id + i;
    r.pool = pool;
    r.slot = slot_dist(rng);
    r.offset = offset_dist(rng);
    r.start = r.slot * slot_time + r.offset;
    r.power = sample_power(cfg, rng);
    out.push_back(r);
  }
}

std::vector<std::int64_t> run_sic_cross_pool(std::vector<Replica>& replicas,
                                             const SystemConfig& cfg) {
  std::vector<std::vector<int>> by_pool(cfg.pools);
  for (int i = 0; i < static_cast<int>(replicas.size()); ++i)
    by_pool[replicas[i].pool].push_back(i);

  std::unordered_set<std::int64_t> decoded;
  std::vector<std::int64_t> all_decoded;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int pool = 0; pool < cfg.pools; ++pool) {
      std::vector<std::int64_t> fresh;
      sic_exhaust(replicas, by_pool[pool], cfg, decoded, fresh, nullptr);
      if (fresh.empty()) continue;
      progress = true;
      all_decoded.insert(all_decoded.end(), fresh.begin(), fresh.end());
      // Cancel siblings of newly decoded packets everywhere.
      for (Replica& r : replicas) {
        if (r.residual == 1.0 && decoded.count(r.packet_id))
          r.residual = cfg.residual_factor;
      }
    }
  }
  std::sort(all_decoded.begin(), all_decoded.end());
  return all_decoded;
}

}  // namespace detail

std::vector<Replica> generate_background(double lambda, const SystemConfig& cfg,
                                         std::mt19937_64& rng) {
  std::vector<std::uint64_t> pool_seeds(cfg.pools);
  for (int pool = 0; pool < cfg.pools; ++pool) pool_seeds[pool] = rng();
  std::vector<Replica> out;
  for (int pool = 0; pool < cfg.pools; ++pool)
    detail::append_pool_background(lambda, cfg, pool, pool_seeds[pool],
                                   detail::background_base_id(pool), out);
  return out;
}

DecodeResult run_sic_pool(std::vector<Replica> replicas, const SystemConfig& cfg,
                          SicTrace* trace) {
  DecodeResult result;
  std::vector<int> idx(replicas.size());
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) idx[i] = i;
  std::unordered_set<std::int64_t> decoded;
  result.iterations = sic_exhaust(replicas, idx, cfg, decoded, result.decoded_packets, trace);
  std::sort(result.decoded_packets.begin(), result.decoded_packets.end());
  return result;
}

bool frame_success(Action action, double lambda, const SystemConfig& cfg,
                   std::mt19937_64& rng) {
  if (action.idle()) return false;

  constexpr std::int64_t kTaggedId = 0;
  std::vector<Replica> tagged = place_tagged_replicas(action, cfg, rng, kTaggedId);
  std::vector<std::uint64_t> pool_seeds(cfg.pools);
  for (int pool = 0; pool < cfg.pools; ++pool) pool_seeds[pool] = rng();

  if (cfg.cross_pool_cancel) {
    std::vector<Replica> all = tagged;
    for (int pool = 0; pool < cfg.pools; ++pool)
      detail::append_pool_background(lambda, cfg, pool, pool_seeds[pool],
                                     detail::background_base_id(pool), all);
    const auto decoded = detail::run_sic_cross_pool(all, cfg);
    return std::binary_search(decoded.begin(), decoded.end(), kTaggedId);
  }

  // Pools decode independently; only pools carrying a tagged replica can
  // contribute to the OR, so the others need not be expanded.
  std::vector<int> selected;
  for (const Replica& r : tagged)
    if (std::find(selected.begin(), selected.end(), r.pool) == selected.end())
      selected.push_back(r.pool);

  for (int pool : selected) {
    std::vector<Replica> pool_replicas;
    for (const Replica& r : tagged)
      if (r.pool == pool) pool_replicas.push_back(r);
    detail::append_pool_background(lambda, cfg, pool, pool_seeds[pool],
                                   detail::background_base_id(pool), pool_replicas);
    if (run_sic_pool(std::move(pool_replicas), cfg).contains(kTaggedId)) return true;
  }
  return false;
}

}  // namespace aoimf
