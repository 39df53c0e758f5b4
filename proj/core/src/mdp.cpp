#include "aoimf/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aoimf/errors.hpp"

namespace aoimf {

void MdpModel::validate() const {
  if (delta_max < 2) throw config_error("MdpModel: delta_max must be >= 2");
  if (actions.empty()) throw config_error("MdpModel: empty action set");
  if (actions.size() != p.size()) throw config_error("MdpModel: |p| != |actions|");
  if (eta < 0.0) throw config_error("MdpModel: eta must be >= 0");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || p[i] > 1.0) throw config_error("MdpModel: p outside [0,1]");
    if (actions[i].idle() && p[i] != 0.0)
      throw config_error("MdpModel: idle action must have p == 0");
  }
}

MdpModel build_model(const SuccessTable& table, double lambda, double eta, int delta_max) {
  if (lambda < 0.0) throw config_error("build_model: lambda must be >= 0");
  MdpModel model;
  model.delta_max = delta_max;
  model.eta = eta;
  model.actions = table.actions;
  model.p.resize(table.actions.size());
  for (std::size_t i = 0; i < table.actions.size(); ++i)
    model.p[i] = success_prob(table, table.actions[i], lambda);
  model.validate();
  return model;
}

std::vector<Action> MdpSolution::policy_actions(const MdpModel& model) const {
  std::vector<Action> out(policy.size());
  for (std::size_t s = 0; s < policy.size(); ++s) out[s] = model.actions[policy[s]];
  return out;
}

namespace {

/// True when `a` beats `b` under the argmin tie-break: smaller objective,
/// then lower energy, then lower d, then lower q.
bool argmin_prefers(double obj_a, Action a, double obj_b, Action b) {
  if (obj_a != obj_b) return obj_a < obj_b;
  if (a.energy() != b.energy()) return a.energy() < b.energy();
  if (a.d != b.d) return a.d < b.d;
  return a.q < b.q;
}

/// Policy from the factored Bellman minimizer argmin_a {eta E(a) - p_a h},
/// which differs from argmin_a Q(delta, a) only by a state constant.
int argmin_state_action(const MdpModel& model, double h) {
  int best = 0;
  double best_obj = model.eta * model.actions[0].energy() - model.p[0] * h;
  for (int a = 1; a < static_cast<int>(model.actions.size()); ++a) {
    const double obj = model.eta * model.actions[a].energy() - model.p[a] * h;
    if (argmin_prefers(obj, model.actions[a], best_obj, model.actions[best])) {
      best = a;
      best_obj = obj;
    }
  }
  return best;
}

MdpSolution degenerate_solution(const MdpModel& model, int ref) {
  const int n = model.delta_max;
  MdpSolution sol;
  sol.degenerate = true;
  sol.iterations = 0;

  int best = 0;
  for (int a = 1; a < static_cast<int>(model.actions.size()); ++a) {
    if (argmin_prefers(model.actions[a].energy(), model.actions[a],
                       model.actions[best].energy(), model.actions[best]))
      best = a;
  }
  sol.policy.assign(n, best);
  sol.rho = model.stage_cost(n, best);  // absorption at delta_max

  // Backward recursion of rho + V(delta) = c(delta) + V(delta+1), then pin V(ref).
  sol.v.assign(n, 0.0);
  for (int s = n - 2; s >= 0; --s)
    sol.v[s] = sol.v[s + 1] - (n - 1 - s);
  const double v_ref = sol.v[ref - 1];
  for (double& v : sol.v) v -= v_ref;

  sol.q_values.assign(n, std::vector<double>(model.actions.size(), 0.0));
  for (int s = 0; s < n; ++s) {
    const int next = model.next_on_failure(s + 1) - 1;
    for (std::size_t a = 0; a < model.actions.size(); ++a)
      sol.q_values[s][a] = model.stage_cost(s + 1, static_cast<int>(a)) + sol.v[next];
  }
  sol.residual = 0.0;
  for (int s = 0; s < n; ++s) {
    const double r = std::abs(sol.rho + sol.v[s] - sol.q_values[s][sol.policy[s]]);
    sol.residual = std::max(sol.residual, r);
  }
  return sol;
}

}  // namespace

MdpSolution relative_value_iteration(const MdpModel& model, const RviOptions& opts,
                                     const std::vector<double>* warm_start) {
  model.validate();
  const int n = model.delta_max;
  const int n_actions = static_cast<int>(model.actions.size());
  const int ref = opts.reference_state;
  if (ref < 1 || ref > n) throw config_error("relative_value_iteration: bad reference state");

  if (*std::max_element(model.p.begin(), model.p.end()) == 0.0)
    return degenerate_solution(model, ref);

  const double tau = opts.damping;
  const double keep = 1.0 - tau;

  std::vector<double> w(n, 0.0);
  if (warm_start != nullptr && static_cast<int>(warm_start->size()) == n) {
    for (int s = 0; s < n; ++s) w[s] = (*warm_start)[s] / keep;
    const double w_ref = w[ref - 1];
    for (double& x : w) x -= w_ref;
  }

  // Per-action constants of the transformed backup
  //   T(w)(s) = min_a [ c(s,a) + tau w(s) + keep (p_a w(1) + (1-p_a) w(s+)) ].
  std::vector<double> add(n_actions), coef(n_actions);
  std::vector<double> raw(n, 0.0);
  double rho = 0.0;
  long iter = 0;
  double span = std::numeric_limits<double>::infinity();

  auto sweep = [&] {
    const double w1 = w[0];
    for (int a = 0; a < n_actions; ++a) {
      add[a] = model.eta * model.actions[a].energy() + model.cost_offset +
               keep * model.p[a] * w1;
      coef[a] = keep * (1.0 - model.p[a]);
    }
    double max_d = -std::numeric_limits<double>::infinity();
    double min_d = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n; ++s) {
      const double w_next = w[model.next_on_failure(s + 1) - 1];
      double best = add[0] + coef[0] * w_next;
      for (int a = 1; a < n_actions; ++a) {
        const double q = add[a] + coef[a] * w_next;
        if (q < best) best = q;
      }
      raw[s] = (s + 1) + tau * w[s] + best;
      const double d = raw[s] - w[s];
      max_d = std::max(max_d, d);
      min_d = std::min(min_d, d);
    }
    rho = 0.5 * (max_d + min_d);
    span = max_d - min_d;
    const double raw_ref = raw[ref - 1];
    for (int s = 0; s < n; ++s) w[s] = raw[s] - raw_ref;
  };

  while (iter < opts.max_iters) {
    sweep();
    ++iter;
    if (span <= opts.tol) break;
  }
  if (span > opts.tol)
    throw convergence_error("relative_value_iteration: span " + std::to_string(span) +
                                " above tolerance after " + std::to_string(iter) +
                                " iterations",
                            span);

  MdpSolution sol;
  sol.iterations = iter;
  sol.rho = rho;
  sol.v.resize(n);
  for (int s = 0; s < n; ++s) sol.v[s] = keep * w[s];

  sol.policy.resize(n);
  for (int s = 0; s < n; ++s) {
    const double h = sol.v[model.next_on_failure(s + 1) - 1] - sol.v[0];
    sol.policy[s] = argmin_state_action(model, h);
  }

  sol.q_values.assign(n, std::vector<double>(n_actions, 0.0));
  sol.residual = 0.0;
  for (int s = 0; s < n; ++s) {
    const double v_next = sol.v[model.next_on_failure(s + 1) - 1];
    double q_min = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_actions; ++a) {
      const double q = model.stage_cost(s + 1, a) + model.p[a] * sol.v[0] +
                       (1.0 - model.p[a]) * v_next;
      sol.q_values[s][a] = q;
      q_min = std::min(q_min, q);
    }
    sol.residual = std::max(sol.residual, std::abs(sol.rho + sol.v[s] - q_min));
  }
  return sol;
}

std::vector<EffectiveAction> filter_dominated(const std::vector<Action>& actions,
                                              const std::vector<double>& p) {
  if (actions.size() != p.size())
    throw std::invalid_argument("filter_dominated: |p| != |actions|");
  const int k = static_cast<int>(actions.size());
  std::vector<bool> removed(k, false);

  // Exact (E, p) duplicates: keep the lexicographically smallest (d, q).
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j || removed[i]) continue;
      if (actions[i].energy() == actions[j].energy() && p[i] == p[j]) {
        const Action a = actions[i], b = actions[j];
        const bool j_smaller = (b.d < a.d) || (b.d == a.d && b.q < a.q);
        if (j_smaller) removed[i] = true;
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    if (removed[i]) continue;
    for (int j = 0; j < k; ++j) {
      if (i == j || removed[j]) continue;
      const bool weakly = actions[j].energy() <= actions[i].energy() && p[j] >= p[i];
      const bool strictly =
          actions[j].energy() < actions[i].energy() || p[j] > p[i];
      if (weakly && strictly) {
        removed[i] = true;
        break;
      }
    }
  }

  std::vector<EffectiveAction> out;
  for (int i = 0; i < k; ++i)
    if (!removed[i]) out.push_back({actions[i], p[i], i});
  std::sort(out.begin(), out.end(), [](const EffectiveAction& a, const EffectiveAction& b) {
    return a.action.energy() < b.action.energy();
  });
  return out;
}

double pairwise_threshold(Action lo, double p_lo, Action hi, double p_hi, double eta) {
  if (hi.energy() <= lo.energy())
    throw std::invalid_argument("pairwise_threshold: requires E(hi) > E(lo)");
  if (p_hi <= p_lo)
    throw std::invalid_argument("pairwise_threshold: requires p_hi > p_lo");
  return eta * (hi.energy() - lo.energy()) / (p_hi - p_lo);
}

std::vector<double> relative_value_gaps(const MdpModel& model, const MdpSolution& sol) {
  std::vector<double> h(model.delta_max);
  for (int s = 0; s < model.delta_max; ++s)
    h[s] = sol.v[model.next_on_failure(s + 1) - 1] - sol.v[0];
  return h;
}

StructureReport extract_structure(const MdpModel& model, const MdpSolution& sol) {
  StructureReport report;
  const int n = model.delta_max;
  const std::vector<double> h = relative_value_gaps(model, sol);

  report.h_nondecreasing = true;
  for (int s = 0; s + 1 < n; ++s) {
    if (h[s + 1] < h[s]) {
      report.h_nondecreasing = false;
      report.first_h_violation = s + 1;
      break;
    }
  }

  for (int s = 1; s < n; ++s)
    if (sol.policy[s] != sol.policy[s - 1]) report.switch_points.push_back(s + 1);

  report.energy_nondecreasing = true;
  for (int s = 1; s < n; ++s) {
    if (model.actions[sol.policy[s]].energy() < model.actions[sol.policy[s - 1]].energy()) {
      report.energy_nondecreasing = false;
      break;
    }
  }

  report.argmin_consistent = true;
  for (int s = 0; s < n; ++s) {
    if (sol.policy[s] != argmin_state_action(model, h[s])) {
      report.argmin_consistent = false;
      break;
    }
  }
  return report;
}

}  // namespace aoimf
