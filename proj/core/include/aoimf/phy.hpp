#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "aoimf/action.hpp"
#include "aoimf/system_config.hpp"

namespace aoimf {

/// One transmitted copy of a packet as seen at the receiver.
struct Replica {
  std::int64_t packet_id = 0;
  int pool = 0;
  int slot = 0;
  double offset = 0.0;    // residual arrival offset within the slot, [0, T_s)
  double start = 0.0;     // receiver-side start time: slot * T_s + offset
  double power = 0.0;     // received power after fading
  double residual = 1.0;  // interference factor: 1 until cancelled, then epsilon
  bool decoded = false;
};

/// Outcome of the capture-SIC procedure in one pool.
struct DecodeResult {
  std::vector<std::int64_t> decoded_packets;  // sorted, unique
  int iterations = 0;                         // number of decode steps performed

  [[nodiscard]] bool contains(std::int64_t packet_id) const;
};

/// Optional per-iteration diagnostics from run_sic_pool.
struct SicTrace {
  struct Step {
    std::int64_t decoded_packet;
    double sinr;                   // SINR of the decoded replica
    std::vector<double> all_sinr;  // SINR of every input replica at this iteration
  };
  std::vector<Step> steps;
};

/// Length of the intersection of [start_a, start_a+T_p) and [start_b, start_b+T_p).
inline double overlap_length(double start_a, double start_b, double packet_time) {
  const double lo = start_a > start_b ? start_a : start_b;
  const double hi_a = start_a + packet_time;
  const double hi_b = start_b + packet_time;
  const double hi = hi_a < hi_b ? hi_a : hi_b;
  return hi > lo ? hi - lo : 0.0;
}

/// Place the tagged device's replicas for one frame: q pools drawn uniformly
/// without replacement, d distinct slots per selected pool, independent
/// offsets U[0, T_s) and fading per replica. All replicas share packet_id.
/// Throws std::invalid_argument for the idle action or d > slots.
std::vector<Replica> place_tagged_replicas(Action action, const SystemConfig& cfg,
                                           std::mt19937_64& rng,
                                           std::int64_t packet_id = 0);

/// Background interferers for every pool: per pool an independent Poisson
/// count with mean lambda * T_f, each replica with uniform slot, uniform
/// offset, independent fading and a distinct packet_id (background packets
/// are single-replica). Pool contents are expanded from per-pool child seeds
/// drawn off `rng`, so a pool's replicas do not depend on which other pools
/// are expanded.
std::vector<Replica> generate_background(double lambda, const SystemConfig& cfg,
                                         std::mt19937_64& rng);

/// Capture-SIC decoding of one pool. Repeats: recompute the time-averaged
/// interference for every replica, find replicas of undecoded packets with
/// SINR >= sinr_threshold, decode the highest-power one (ties broken by
/// lowest packet_id), and drop the residual factor of every replica of that
/// packet in the pool to epsilon. Stops when no replica is decodable or after
/// sic_max_iters decode steps.
DecodeResult run_sic_pool(std::vector<Replica> replicas, const SystemConfig& cfg,
                          SicTrace* trace = nullptr);

/// One calibration frame for a tagged device: place replicas, draw background
/// at per-pool intensity lambda, decode each selected pool independently and
/// OR the outcomes (tagged packet_id 0). With cross_pool_cancel set, decoding
/// a packet in one pool also cancels its replicas in the other pools and
/// decoding rounds repeat until no pool decodes anything new. The idle action
/// returns false without simulating.
bool frame_success(Action action, double lambda, const SystemConfig& cfg,
                   std::mt19937_64& rng);

namespace detail {

/// Background replicas for a single pool expanded from a dedicated seed;
/// packet ids start at base_packet_id.
void append_pool_background(double lambda, const SystemConfig& cfg, int pool,
                            std::uint64_t pool_seed, std::int64_t base_packet_id,
                            std::vector<Replica>& out);

/// Per-pool base id leaving room for one id per background replica.
inline std::int64_t background_base_id(int pool) {
  return 1 + (static_cast<std::int64_t>(pool) << 32);
}

/// SIC over all pools with cross-pool sibling cancellation between pool
/// passes. Mutates replica state; returns decoded packet ids (sorted).
std::vector<std::int64_t> run_sic_cross_pool(std::vector<Replica>& replicas,
                                             const SystemConfig& cfg);

}  // namespace detail

}  // namespace aoimf
