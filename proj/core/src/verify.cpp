#include "aoimf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "aoimf/mean_field.hpp"
#include "aoimf/occupation_lp.hpp"
#include "aoimf/rng.hpp"

namespace aoimf {

MdpModel make_random_model(std::mt19937_64& rng, int max_delta_max, int model_index) {
  static constexpr double kEtas[] = {0.0, 0.5, 2.0};
  MdpModel model;
  std::uniform_int_distribution<int> delta_dist(5, max_delta_max);
  std::uniform_int_distribution<int> extra_dist(1, 4);
  std::uniform_int_distribution<int> dq_dist(1, 3);
  std::uniform_real_distribution<double> p_dist(0.0, 1.0);

  model.delta_max = delta_dist(rng);
  model.eta = kEtas[model_index % 3];
  model.actions.push_back({0, 0});
  model.p.push_back(0.0);
  std::set<Action> used;
  const int extra = extra_dist(rng);
  while (static_cast<int>(model.actions.size()) < 1 + extra) {
    const Action a{dq_dist(rng), dq_dist(rng)};
    if (!used.insert(a).second) continue;
    model.actions.push_back(a);
    model.p.push_back(p_dist(rng));
  }
  return model;
}

namespace {

struct Check {
  const char* name;
  bool pass;
  std::string detail;
};

Check check_lp_vs_rvi(const VerifyOptions& opts) {
  std::mt19937_64 rng(derive_seed(opts.seed, 0xA11CE));
  double worst = 0.0;
  for (int i = 0; i < opts.lp_models; ++i) {
    const MdpModel model = make_random_model(rng, std::min(opts.delta_max, 20), i);
    const MdpSolution rvi = relative_value_iteration(model);
    const OccupationSolution lp = occupation_lp_solve(model);
    worst = std::max(worst, std::abs(rvi.rho - lp.rho));
  }
  return {"lp_vs_rvi", worst <= 1e-6,
          "max |rho_rvi - rho_lp| = " + std::to_string(worst)};
}

Check check_structure(const VerifyOptions& opts) {
  std::mt19937_64 rng(derive_seed(opts.seed, 0xB0B));
  bool h_ok = true, order_ok = true, dominance_ok = true;
  for (int i = 0; i < opts.structure_models; ++i) {
    const MdpModel model = make_random_model(rng, 40, i);
    const MdpSolution sol = relative_value_iteration(model);
    const StructureReport report = extract_structure(model, sol);
    h_ok = h_ok && report.h_nondecreasing;

    const auto chain = filter_dominated(model.actions, model.p);
    auto chain_pos = [&](int action_idx) {
      for (std::size_t c = 0; c < chain.size(); ++c)
        if (chain[c].index == action_idx) return static_cast<int>(c);
      return -1;
    };
    int prev = -1;
    for (int s = 0; s < model.delta_max; ++s) {
      const int pos = chain_pos(sol.policy[s]);
      if (pos < 0) dominance_ok = false;
      if (pos >= 0 && pos < prev) order_ok = false;
      if (pos >= 0) prev = pos;
    }
  }
  Check c{"structure", h_ok && order_ok && dominance_ok, ""};
  c.detail = std::string("h_monotone=") + (h_ok ? "yes" : "no") +
             " threshold_order=" + (order_ok ? "yes" : "no") +
             " dominance_excluded=" + (dominance_ok ? "yes" : "no");
  return c;
}

Check check_stationary_closed_form(const VerifyOptions& opts) {
  std::mt19937_64 rng(derive_seed(opts.seed, 0x57A7));
  std::uniform_real_distribution<double> p_dist(0.05, 0.95);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 5 + static_cast<int>(rng() % 60);
    const double p = p_dist(rng);
    const StationaryResult stat = stationary_distribution(std::vector<double>(n, p));
    // Truncated geometric law: m(delta) = p (1-p)^(delta-1), tail at delta_max.
    for (int s = 0; s < n; ++s) {
      const double expected = s + 1 < n ? p * std::pow(1.0 - p, s) : std::pow(1.0 - p, n - 1);
      worst = std::max(worst, std::abs(stat.m[s] - expected));
    }
  }
  return {"stationary_closed_form", worst <= 1e-12,
          "max |m - closed form| = " + std::to_string(worst)};
}

Check check_fading_normalization(const VerifyOptions& opts) {
  double worst = 0.0;
  for (const double k : {0.0, 2.0, 10.0}) {
    std::mt19937_64 rng(derive_seed(opts.seed, 0xFAD, static_cast<std::uint64_t>(k)));
    double sum = 0.0;
    const long draws = 1000000;
    for (long i = 0; i < draws; ++i) sum += rician_power_coeff(k, rng);
    worst = std::max(worst, std::abs(sum / draws - 1.0));
  }
  return {"fading_normalization", worst <= 0.005,
          "max |mean - 1| = " + std::to_string(worst)};
}

}  // namespace

bool run_verification_suite(const VerifyOptions& opts, std::ostream& out) {
  const Check checks[] = {
      check_lp_vs_rvi(opts),
      check_structure(opts),
      check_stationary_closed_form(opts),
      check_fading_normalization(opts),
  };
  bool all = true;
  for (const Check& c : checks) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
    all = all && c.pass;
  }
  return all;
}

}  // namespace aoimf
