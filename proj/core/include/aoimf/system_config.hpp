#pragma once

#include <cstdint>
#include <string>

namespace aoimf {

/// Frame, pool, and channel parameters for the packet-level simulator.
///
/// A frame of duration frame_time holds `pools` parallel contention pools,
/// each partitioned into `slots` logical slots of duration frame_time/slots.
/// Replicas have physical duration packet_time and arrive with a residual
/// offset inside their slot, so receptions are asynchronous and overlaps
/// fractional.
struct SystemConfig {
  int n_devices = 30;           // N
  int pools = 3;                // R
  int slots = 3;                // M logical slots per pool per frame
  double frame_time = 1.0;      // T_f
  double packet_time = 0.25;    // T_p, must not exceed the slot duration
  double noise_power = 0.5;     // sigma^2
  double sinr_threshold = 2.0;  // capture threshold gamma_th
  double residual_factor = 0.05;  // epsilon, interference left after cancellation
  double rician_k = 10.0;       // linear K-factor; negative disables fading (gain == 1)
  double rx_power = 1.0;        // nominal received power per replica
  int max_reps = 3;             // D, max replicas per selected pool
  int delta_max = 200;          // AoI truncation level
  int sic_max_iters = 100;
  bool cross_pool_cancel = false;

  [[nodiscard]] double slot_time() const { return frame_time / slots; }
  [[nodiscard]] bool fading_enabled() const { return rician_k >= 0.0; }

  /// Throws config_error on any violated parameter constraint.
  void validate() const;
};

/// FNV-1a digest of the canonical config serialization. Stored in calibrated
/// tables so downstream commands can detect a config change.
std::uint64_t config_digest(const SystemConfig& cfg);
std::string config_digest_hex(const SystemConfig& cfg);

}  // namespace aoimf
