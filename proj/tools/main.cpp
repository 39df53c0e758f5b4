// Command-line front end: calibrate the success table, solve mean-field
// equilibria, sweep the AoI-energy tradeoff, evaluate age-independent
// baselines, validate the mean-field prediction in closed loop, and run the
// oracle verification suite.
//
// Exit codes: 0 ok, 2 config error, 3 I/O error, 4 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aoimf/baselines.hpp"
#include "aoimf/closed_loop.hpp"
#include "aoimf/errors.hpp"
#include "aoimf/io.hpp"
#include "aoimf/mean_field.hpp"
#include "aoimf/success_table.hpp"
#include "aoimf/sweep.hpp"
#include "aoimf/verify.hpp"
#include "aoimf/version.hpp"
#include "json.hpp"

using namespace aoimf;

namespace {

struct Settings {
  SystemConfig cfg;
  long trials = 20000;
  double load_max = 24.0;
  double load_step = 2.0;
  FixedPointConfig fp;
};

Settings load_settings(const std::string& path) {
  Settings s;
  if (path.empty()) return s;
  std::ifstream is(path);
  if (!is) throw io_error("cannot open config file " + path);
  nlohmann::json j;
  try {
    is >> j;
    if (j.contains("system")) {
      const auto& sys = j["system"];
      s.cfg.n_devices = sys.value("n_devices", s.cfg.n_devices);
      s.cfg.pools = sys.value("pools", s.cfg.pools);
      s.cfg.slots = sys.value("slots", s.cfg.slots);
      s.cfg.frame_time = sys.value("frame_time", s.cfg.frame_time);
      s.cfg.packet_time = sys.value("packet_time", s.cfg.packet_time);
      s.cfg.noise_power = sys.value("noise_power", s.cfg.noise_power);
      s.cfg.sinr_threshold = sys.value("sinr_threshold", s.cfg.sinr_threshold);
      s.cfg.residual_factor = sys.value("residual_factor", s.cfg.residual_factor);
      s.cfg.rician_k = sys.value("rician_k", s.cfg.rician_k);
      s.cfg.rx_power = sys.value("rx_power", s.cfg.rx_power);
      s.cfg.max_reps = sys.value("max_reps", s.cfg.max_reps);
      s.cfg.delta_max = sys.value("delta_max", s.cfg.delta_max);
      s.cfg.sic_max_iters = sys.value("sic_max_iters", s.cfg.sic_max_iters);
      s.cfg.cross_pool_cancel = sys.value("cross_pool_cancel", s.cfg.cross_pool_cancel);
    }
    if (j.contains("calibration")) {
      const auto& cal = j["calibration"];
      s.trials = cal.value("trials", s.trials);
      s.load_max = cal.value("load_max", s.load_max);
      s.load_step = cal.value("load_step", s.load_step);
    }
    if (j.contains("fixed_point")) {
      const auto& fp = j["fixed_point"];
      s.fp.damp_load = fp.value("damp_load", s.fp.damp_load);
      s.fp.damp_dist = fp.value("damp_dist", s.fp.damp_dist);
      s.fp.tol_load = fp.value("tol_load", s.fp.tol_load);
      s.fp.tol_dist = fp.value("tol_dist", s.fp.tol_dist);
      s.fp.max_outer_iters = fp.value("max_outer_iters", s.fp.max_outer_iters);
      s.fp.lambda_init = fp.value("lambda_init", s.fp.lambda_init);
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error("malformed config file " + path + ": " + e.what());
  }
  return s;
}

std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

SuccessTable load_table_checked(const std::string& path, const SystemConfig& cfg) {
  const SuccessTable table = load_table(path);
  if (!table.cfg_digest.empty() && !digest_matches(table, cfg))
    std::cerr << "warning: table " << path
              << " was calibrated under a different system config (digest "
              << table.cfg_digest << " vs " << config_digest_hex(cfg) << ")\n";
  return table;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw io_error("cannot open output file " + path);
  return os;
}

void write_equilibrium_file(std::ostream& os, const Equilibrium& eq, double eta,
                            std::uint64_t seed, const std::string& digest) {
  write_file_preamble(os, seed, digest);
  os << "eta,lambda_star,rho,avg_aoi,avg_energy,converged\n";
  os << format_double(eta) << ',' << format_double(eq.lambda_star) << ','
     << format_double(eq.rho) << ',' << format_double(eq.avg_aoi) << ','
     << format_double(eq.avg_energy) << ',' << (eq.converged ? 1 : 0) << "\n";
  os << "delta,d,q,V\n";
  for (std::size_t s = 0; s < eq.policy.size(); ++s)
    os << (s + 1) << ',' << eq.policy[s].d << ',' << eq.policy[s].q << ','
       << format_double(eq.v[s]) << "\n";
}

void print_equilibrium_summary(const Equilibrium& eq, double eta) {
  std::cout << "eta=" << format_double(eta) << " lambda_star=" << format_double(eq.lambda_star)
            << " rho=" << format_double(eq.rho) << " avg_aoi=" << format_double(eq.avg_aoi)
            << " avg_energy=" << format_double(eq.avg_energy)
            << " converged=" << (eq.converged ? 1 : 0)
            << " outer_iters=" << eq.outer_iters;
  std::cout << " switches=";
  bool first = true;
  for (std::size_t s = 1; s < eq.policy.size(); ++s) {
    if (!(eq.policy[s] == eq.policy[s - 1])) {
      std::cout << (first ? "" : ";") << (s + 1) << ":" << to_string(eq.policy[s]);
      first = false;
    }
  }
  if (first) std::cout << "none";
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-of-information mean-field random access toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand name

  std::string config_path;
  std::uint64_t seed = 1;
  int threads = 0;
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  app.add_option("--seed", seed, "master seed for all randomness");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");

  Settings s;
  try {
    s = load_settings(find_config_path(argc, argv));
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Monte Carlo calibration of the success table");
  std::string cal_out;
  bool cal_no_fading = false;
  cal->add_option("--out", cal_out, "output table file")->required();
  cal->add_option("--trials", s.trials, "Monte Carlo trials per cell");
  cal->add_option("--load-max", s.load_max, "largest grid load");
  cal->add_option("--load-step", s.load_step, "grid spacing");
  cal->add_option("--noise", s.cfg.noise_power, "noise power sigma^2");
  cal->add_option("--rician-k", s.cfg.rician_k, "Rician K factor (negative = no fading)");
  cal->add_flag("--no-fading", cal_no_fading, "disable fading (gain = 1)");

  // solve
  auto* solve = app.add_subcommand("solve", "single-eta mean-field equilibrium");
  std::string solve_table, solve_out;
  double solve_eta = 1.0;
  solve->add_option("--table", solve_table, "calibrated table file")->required();
  solve->add_option("--eta", solve_eta, "energy weight")->required();
  solve->add_option("--delta-max", s.cfg.delta_max, "AoI truncation");
  solve->add_option("--out", solve_out, "policy dump file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "eta sweep for the AoI-energy tradeoff");
  std::string sweep_table, sweep_out;
  double eta_min = 1e-3, eta_max = 1e2;
  int eta_points = 20;
  sweep->add_option("--table", sweep_table, "calibrated table file")->required();
  sweep->add_option("--eta-min", eta_min, "smallest eta");
  sweep->add_option("--eta-max", eta_max, "largest eta");
  sweep->add_option("--eta-points", eta_points, "grid size");
  sweep->add_option("--delta-max", s.cfg.delta_max, "AoI truncation");
  sweep->add_option("--out", sweep_out, "Pareto CSV file")->required();

  // baseline
  auto* base = app.add_subcommand("baseline", "age-independent baseline curves");
  std::string base_table, base_out;
  int budget_points = 21;
  base->add_option("--table", base_table, "calibrated table file")->required();
  base->add_option("--out", base_out, "baseline CSV file")->required();
  base->add_option("--budget-points", budget_points, "points per curve");
  base->add_option("--delta-max", s.cfg.delta_max, "AoI sentinel for unreached success");

  // validate
  auto* val = app.add_subcommand("validate", "closed-loop check of the mean-field prediction");
  std::string val_table, val_out;
  double val_eta = 1.0;
  long val_frames = 50000, val_warmup = -1;
  val->add_option("--table", val_table, "calibrated table file")->required();
  val->add_option("--eta", val_eta, "energy weight of the policy to validate");
  val->add_option("--frames", val_frames, "simulated frames");
  val->add_option("--warmup", val_warmup, "warmup frames (default 10%, min 500)");
  val->add_option("--delta-max", s.cfg.delta_max, "AoI truncation");
  val->add_option("--out", val_out, "report file");

  // verify
  auto* ver = app.add_subcommand("verify", "solver oracle and structure checks");
  VerifyOptions vopts;
  ver->add_option("--delta-max", vopts.delta_max, "state-space cap for LP models");
  ver->add_option("--models", vopts.structure_models, "random models for structure checks");
  ver->add_option("--lp-models", vopts.lp_models, "random models for the LP oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cal_no_fading) s.cfg.rician_k = -1.0;
    const PopulationConfig pop{s.cfg.n_devices, s.cfg.pools, s.cfg.frame_time};

    if (*cal) {
      s.cfg.validate();
      const SuccessTable table =
          calibrate_table(s.cfg, default_load_grid(s.load_max, s.load_step), s.trials,
                          seed, threads);
      save_table(table, cal_out);
      std::cout << "calibrated " << table.actions.size() << " actions x "
                << table.load_grid.size() << " loads, " << s.trials
                << " trials/cell -> " << cal_out << "\n";
    } else if (*solve) {
      const SuccessTable table = load_table_checked(solve_table, s.cfg);
      const Equilibrium eq = solve_equilibrium(solve_eta, table, pop, s.fp, s.cfg.delta_max);
      print_equilibrium_summary(eq, solve_eta);
      if (!solve_out.empty()) {
        auto os = open_output(solve_out);
        write_equilibrium_file(os, eq, solve_eta, seed, table.cfg_digest);
      }
    } else if (*sweep) {
      const SuccessTable table = load_table_checked(sweep_table, s.cfg);
      const std::vector<double> grid = log_grid(eta_min, eta_max, eta_points);
      std::vector<Equilibrium> eqs;
      const auto records = sweep_eta(grid, table, pop, s.fp, s.cfg.delta_max, &eqs, threads);
      auto os = open_output(sweep_out);
      write_file_preamble(os, seed, table.cfg_digest);
      os << "eta,lambda_star,avg_aoi,avg_energy,rho,converged\n";
      for (const SweepRecord& r : records) {
        os << format_double(r.eta) << ',' << format_double(r.lambda_star) << ','
           << format_double(r.avg_aoi) << ',' << format_double(r.avg_energy) << ','
           << format_double(r.rho) << ',' << (r.converged ? 1 : 0) << "\n";
        print_equilibrium_summary(eqs[&r - records.data()], r.eta);
      }
      std::cout << "wrote " << records.size() << " sweep records -> " << sweep_out << "\n";
    } else if (*base) {
      const SuccessTable table = load_table_checked(base_table, s.cfg);
      auto os = open_output(base_out);
      write_file_preamble(os, seed, table.cfg_digest);
      os << "kind,parameter,budget,p,avg_aoi,feasible\n";
      const double max_e = table.max_energy();
      for (int i = 0; i < budget_points; ++i) {
        const double c = max_e * i / (budget_points - 1);
        const RandomizedBaseline b = randomized_lp(table, c, pop);
        const double aoi = b.success_unreached ? s.cfg.delta_max : b.avg_aoi;
        os << "randomized,," << format_double(c) << ',' << format_double(b.p_star) << ','
           << format_double(aoi) << ',' << (b.success_unreached ? 0 : 1) << "\n";
      }
      for (const double alpha : {0.5, 0.1, 0.9}) {
        for (int i = 0; i < budget_points; ++i) {
          const double budget = (2.0 - alpha) * i / (budget_points - 1);
          const IrsaBaseline b = irsa_baseline(alpha, budget, table, pop);
          const bool unreached = !b.feasible || b.p_success <= 0.0;
          const double aoi = unreached ? s.cfg.delta_max : b.avg_aoi;
          os << "irsa," << format_double(alpha) << ',' << format_double(budget) << ','
             << format_double(b.p_success) << ',' << format_double(aoi) << ','
             << (b.feasible && !unreached ? 1 : 0) << "\n";
        }
      }
      std::cout << "wrote baseline curves -> " << base_out << "\n";
    } else if (*val) {
      s.cfg.validate();
      const SuccessTable table = load_table_checked(val_table, s.cfg);
      if (val_warmup < 0) val_warmup = std::max<long>(500, val_frames / 10);
      const Equilibrium eq = solve_equilibrium(val_eta, table, pop, s.fp, s.cfg.delta_max);
      ClosedLoopResult r =
          closed_loop_simulate(eq.policy, s.cfg, val_frames, val_warmup, seed);
      r.predicted_aoi = eq.avg_aoi;
      r.predicted_energy = eq.avg_energy;
      const double aoi_gap = std::abs(r.mean_aoi - eq.avg_aoi) / eq.avg_aoi;
      const double energy_gap = eq.avg_energy > 0.0
                                    ? std::abs(r.mean_energy - eq.avg_energy) / eq.avg_energy
                                    : std::abs(r.mean_energy - eq.avg_energy);
      std::cout << "equilibrium: converged=" << (eq.converged ? 1 : 0)
                << " avg_aoi=" << format_double(eq.avg_aoi)
                << " avg_energy=" << format_double(eq.avg_energy) << "\n";
      std::cout << "closed loop (" << val_frames << " frames, warmup " << val_warmup
                << "): avg_aoi=" << format_double(r.mean_aoi)
                << " avg_energy=" << format_double(r.mean_energy) << "\n";
      std::cout << "relative gaps: aoi=" << format_double(aoi_gap)
                << " energy=" << format_double(energy_gap) << "\n";
      if (!val_out.empty()) {
        auto os = open_output(val_out);
        write_file_preamble(os, seed, table.cfg_digest);
        os << "metric,mean_field,closed_loop,relative_gap\n";
        os << "avg_aoi," << format_double(eq.avg_aoi) << ',' << format_double(r.mean_aoi)
           << ',' << format_double(aoi_gap) << "\n";
        os << "avg_energy," << format_double(eq.avg_energy) << ','
           << format_double(r.mean_energy) << ',' << format_double(energy_gap) << "\n";
      }
    } else if (*ver) {
      vopts.seed = seed;
      if (!run_verification_suite(vopts, std::cout)) return 4;
    }
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
