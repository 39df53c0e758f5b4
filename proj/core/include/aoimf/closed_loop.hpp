#pragma once

#include <cstdint>
#include <vector>

#include "aoimf/action.hpp"
#include "aoimf/system_config.hpp"

namespace aoimf {

/// Joint packet-level simulation of all N devices applying a shared policy.
struct ClosedLoopResult {
  std::vector<double> per_device_aoi;  // time-average AoI per device
  double mean_aoi = 0.0;               // population mean of per-device means
  double mean_energy = 0.0;            // replicas per device per frame
  long frames = 0;
  long warmup = 0;
  std::uint64_t seed = 0;
  // Mean-field prediction attached by the caller for gap reporting.
  double predicted_aoi = 0.0;
  double predicted_energy = 0.0;
};

/// Simulate `frames` frames of the N-device system. Every device holds its
/// own AoI (initialized to 1), applies policy[aoi-1] each frame, and places
/// its replicas into the shared pools; per-frame SIC over the actual replica
/// soup decides each device's delivery, so no calibrated table enters the
/// loop. Metrics accumulate after `warmup` frames, with AoI sampled at frame
/// start.
ClosedLoopResult closed_loop_simulate(const std::vector<Action>& policy,
                                      const SystemConfig& cfg, long frames, long warmup,
                                      std::uint64_t seed);

}  // namespace aoimf
