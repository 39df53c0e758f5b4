#pragma once

#include <cstdint>
#include <random>

namespace aoimf {

/// splitmix64 finalizer; used to derive well-mixed child seeds from a master
/// seed and one or more stream indices so parallel workers produce results
/// that do not depend on scheduling.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(master ^ mix64(stream));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Unit-mean Rician power coefficient |h|^2 with h = sqrt(K/(K+1)) + CN(0, 1/(K+1)).
/// K is the linear K-factor; K = 0 degenerates to Rayleigh fading.
inline double rician_power_coeff(double k_factor, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double los = std::sqrt(k_factor / (k_factor + 1.0));
  const double sigma = std::sqrt(0.5 / (k_factor + 1.0));
  const double re = los + sigma * gauss(rng);
  const double im = sigma * gauss(rng);
  return re * re + im * im;
}

}  // namespace aoimf
