#include "aoimf/system_config.hpp"

#include <cstdio>

#include "aoimf/errors.hpp"

namespace aoimf {

void SystemConfig::validate() const {
  if (n_devices < 1) throw config_error("n_devices must be >= 1");
  if (pools < 1) throw config_error("pools must be >= 1");
  if (slots < 1) throw config_error("slots must be >= 1");
  if (frame_time <= 0.0) throw config_error("frame_time must be > 0");
  if (packet_time <= 0.0 || packet_time > slot_time() + 1e-12)
    throw config_error("packet_time must be in (0, frame_time/slots]");
  if (noise_power <= 0.0) throw config_error("noise_power must be > 0");
  if (sinr_threshold <= 0.0) throw config_error("sinr_threshold must be > 0");
  if (residual_factor < 0.0 || residual_factor > 1.0)
    throw config_error("residual_factor must be in [0,1]");
  if (rx_power <= 0.0) throw config_error("rx_power must be > 0");
  if (max_reps < 1 || max_reps > slots)
    throw config_error("max_reps must be in 1..slots (replicas occupy distinct slots)");
  if (delta_max < 2) throw config_error("delta_max must be >= 2");
  if (sic_max_iters < 1) throw config_error("sic_max_iters must be >= 1");
}

std::uint64_t config_digest(const SystemConfig& cfg) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "N=%d;R=%d;M=%d;Tf=%.17g;Tp=%.17g;s2=%.17g;gth=%.17g;eps=%.17g;"
                "K=%.17g;P=%.17g;D=%d;dmax=%d;sic=%d;xpool=%d",
                cfg.n_devices, cfg.pools, cfg.slots, cfg.frame_time, cfg.packet_time,
                cfg.noise_power, cfg.sinr_threshold, cfg.residual_factor, cfg.rician_k,
                cfg.rx_power, cfg.max_reps, cfg.delta_max, cfg.sic_max_iters,
                cfg.cross_pool_cancel ? 1 : 0);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char* p = buf; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_digest_hex(const SystemConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_digest(cfg)));
  return buf;
}

}  // namespace aoimf
