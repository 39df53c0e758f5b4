#pragma once

#include <compare>
#include <string>
#include <vector>

namespace aoimf {

/// Frame-level access action: d replicas in each of q selected pools.
/// (0,0) is the idle action; otherwise d >= 1 and q >= 1.
struct Action {
  int d = 0;
  int q = 0;

  [[nodiscard]] bool idle() const { return d == 0 && q == 0; }
  /// Transmission cost: total number of transmitted replicas.
  [[nodiscard]] int energy() const { return d * q; }

  auto operator<=>(const Action&) const = default;
};

/// Full action set: idle plus every (d,q) with d in 1..max_reps, q in 1..pools.
/// Ordered idle first, then lexicographically by (d,q).
inline std::vector<Action> action_set(int max_reps, int pools) {
  std::vector<Action> actions;
  actions.push_back({0, 0});
  for (int d = 1; d <= max_reps; ++d)
    for (int q = 1; q <= pools; ++q) actions.push_back({d, q});
  return actions;
}

inline std::string to_string(Action a) {
  return "(" + std::to_string(a.d) + "," + std::to_string(a.q) + ")";
}

}  // namespace aoimf
