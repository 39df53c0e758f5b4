#pragma once

#include <cstdint>
#include <ostream>
#include <random>

#include "aoimf/mdp.hpp"

namespace aoimf {

/// Random small MDP instance for oracle cross-checks: idle plus 1..4 distinct
/// non-idle actions with success probabilities uniform on [0,1], eta cycling
/// over {0, 0.5, 2}.
MdpModel make_random_model(std::mt19937_64& rng, int max_delta_max, int model_index);

struct VerifyOptions {
  int delta_max = 12;        // cap for the LP oracle models (must be <= 20)
  std::uint64_t seed = 1;
  int structure_models = 50;
  int lp_models = 25;
};

/// Cross-checks the solver stack against its independent oracles and the
/// structural properties of converged solutions:
///   - RVI average cost equals the occupation-measure LP optimum (<= 1e-6)
///   - relative value gaps h(delta) nondecreasing
///   - policies threshold-ordered along the dominance-filtered chain
///   - dominated actions never selected
///   - stationary distribution matches the truncated geometric closed form
///   - Rician power coefficient has unit mean
/// Prints one line per check; returns true when all pass.
bool run_verification_suite(const VerifyOptions& opts, std::ostream& out);

}  // namespace aoimf
