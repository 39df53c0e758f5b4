#include "aoimf/success_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aoimf/detail/parallel.hpp"
#include "aoimf/errors.hpp"
#include "aoimf/io.hpp"
#include "aoimf/phy.hpp"
#include "aoimf/rng.hpp"

namespace aoimf {

int SuccessTable::action_index(Action a) const {
  for (int i = 0; i < static_cast<int>(actions.size()); ++i)
    if (actions[i] == a) return i;
  return -1;
}

double SuccessTable::max_energy() const {
  double e = 0.0;
  for (Action a : actions) e = std::max(e, static_cast<double>(a.energy()));
  return e;
}

std::vector<double> default_load_grid(double load_max, double step) {
  std::vector<double> grid;
  for (double v = 0.0; v <= load_max + 1e-12; v += step) grid.push_back(v);
  return grid;
}

SuccessTable calibrate_table(const SystemConfig& cfg, std::vector<double> load_grid,
                             long trials, std::uint64_t seed, int n_threads) {
  cfg.validate();
  if (trials < 1) throw config_error("calibrate_table: trials must be >= 1");
  if (load_grid.empty()) throw config_error("calibrate_table: empty load grid");
  for (std::size_t i = 0; i < load_grid.size(); ++i) {
    if (load_grid[i] < 0.0) throw config_error("calibrate_table: negative load");
    if (i > 0 && load_grid[i] <= load_grid[i - 1])
      throw config_error("calibrate_table: load grid must be strictly increasing");
  }

  SuccessTable table;
  table.load_grid = std::move(load_grid);
  table.actions = action_set(cfg.max_reps, cfg.pools);
  table.trials = trials;
  table.seed = seed;
  table.cfg_digest = config_digest_hex(cfg);
  const std::size_t n_grid = table.load_grid.size();
  table.p_hat.assign(table.actions.size(), std::vector<double>(n_grid, 0.0));

  // Cells cover non-idle actions only; the idle row stays exactly zero.
  const std::size_t n_cells = (table.actions.size() - 1) * n_grid;
  detail::parallel_for(n_cells, n_threads, [&](std::size_t cell) {
    const std::size_t action_idx = 1 + cell / n_grid;
    const std::size_t grid_idx = cell % n_grid;
    const Action action = table.actions[action_idx];
    const double lambda = table.load_grid[grid_idx];
    std::mt19937_64 rng(derive_seed(seed, action_idx, grid_idx));
    long successes = 0;
    for (long t = 0; t < trials; ++t)
      if (frame_success(action, lambda, cfg, rng)) ++successes;
    table.p_hat[action_idx][grid_idx] = static_cast<double>(successes) / trials;
  });
  return table;
}

double success_prob(const SuccessTable& table, Action action, double lambda) {
  const int idx = table.action_index(action);
  if (idx < 0)
    throw std::invalid_argument("success_prob: action " + to_string(action) +
                                " not in table");
  if (action.idle()) return 0.0;
  const auto& grid = table.load_grid;
  const auto& row = table.p_hat[idx];
  if (lambda <= grid.front()) return row.front();
  if (lambda >= grid.back()) return row.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), lambda);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double t = (lambda - grid[lo]) / (grid[hi] - grid[lo]);
  return row[lo] + t * (row[hi] - row[lo]);
}

void save_table(const SuccessTable& table, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw io_error("save_table: cannot open " + path.string());
  write_file_preamble(os, table.seed, table.cfg_digest);
  os << "lambda,d,q,p_hat,trials\n";
  for (std::size_t g = 0; g < table.load_grid.size(); ++g) {
    for (std::size_t a = 0; a < table.actions.size(); ++a) {
      os << format_double(table.load_grid[g]) << ',' << table.actions[a].d << ','
         << table.actions[a].q << ',' << format_double(table.p_hat[a][g]) << ','
         << table.trials << "\n";
    }
  }
  if (!os) throw io_error("save_table: write failed for " + path.string());
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw io_error(std::string("load_table: bad ") + what + " value '" + s + "'");
  return v;
}

}  // namespace

SuccessTable load_table(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw io_error("load_table: cannot open " + path.string());

  SuccessTable table;
  std::string line;
  bool header_seen = false;
  std::vector<double> lambdas;
  std::vector<Action> row_actions;
  std::vector<double> row_p;
  std::vector<long> row_trials;

  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# seed=", 0) == 0)
        table.seed = std::strtoull(line.c_str() + 7, nullptr, 10);
      else if (line.rfind("# cfg_digest=", 0) == 0)
        table.cfg_digest = line.substr(13);
      continue;
    }
    if (!header_seen) {
      if (line != "lambda,d,q,p_hat,trials")
        throw io_error("load_table: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 5)
      throw io_error("load_table: expected 5 fields, got " +
                     std::to_string(fields.size()) + " in '" + line + "'");
    lambdas.push_back(parse_double(fields[0], "lambda"));
    row_actions.push_back({std::atoi(fields[1].c_str()), std::atoi(fields[2].c_str())});
    const double p = parse_double(fields[3], "p_hat");
    if (p < 0.0 || p > 1.0) throw io_error("load_table: p_hat outside [0,1]");
    row_p.push_back(p);
    row_trials.push_back(std::atol(fields[4].c_str()));
  }
  if (!header_seen) throw io_error("load_table: missing header in " + path.string());
  if (lambdas.empty()) throw io_error("load_table: no data rows in " + path.string());

  // First block (rows sharing the first lambda) defines the action list.
  std::size_t block = 1;
  while (block < lambdas.size() && lambdas[block] == lambdas[0]) ++block;
  if (lambdas.size() % block != 0)
    throw io_error("load_table: truncated file (incomplete action block)");
  table.actions.assign(row_actions.begin(), row_actions.begin() + block);
  const std::size_t n_grid = lambdas.size() / block;
  table.load_grid.resize(n_grid);
  table.p_hat.assign(block, std::vector<double>(n_grid, 0.0));
  table.trials = row_trials[0];
  for (std::size_t g = 0; g < n_grid; ++g) {
    table.load_grid[g] = lambdas[g * block];
    if (g > 0 && table.load_grid[g] <= table.load_grid[g - 1])
      throw io_error("load_table: load grid not strictly increasing");
    for (std::size_t a = 0; a < block; ++a) {
      const std::size_t row = g * block + a;
      if (lambdas[row] != table.load_grid[g] || !(row_actions[row] == table.actions[a]))
        throw io_error("load_table: inconsistent action block at row " +
                       std::to_string(row));
      if (row_trials[row] != table.trials)
        throw io_error("load_table: inconsistent trials column");
      table.p_hat[a][g] = row_p[row];
    }
  }
  return table;
}

bool digest_matches(const SuccessTable& table, const SystemConfig& cfg) {
  return table.cfg_digest == config_digest_hex(cfg);
}

std::vector<MonotonicityViolation> congestion_monotonicity_violations(
    const SuccessTable& table) {
  std::vector<MonotonicityViolation> out;
  const double slack = 3.0 * std::sqrt(1.0 / static_cast<double>(table.trials));
  for (std::size_t a = 0; a < table.actions.size(); ++a) {
    for (std::size_t g = 0; g + 1 < table.load_grid.size(); ++g) {
      const double rise = table.p_hat[a][g + 1] - table.p_hat[a][g];
      if (rise > slack)
        out.push_back({table.actions[a], static_cast<int>(g), rise});
    }
  }
  return out;
}

std::vector<DiversityComparison> diversity_dominance_report(const SuccessTable& table) {
  std::vector<DiversityComparison> out;
  for (const Action diverse : table.actions) {
    if (diverse.q <= diverse.d) continue;  // want q > d, e.g. (1,2)
    const Action repetition{diverse.q, diverse.d};
    const int i = table.action_index(diverse);
    const int j = table.action_index(repetition);
    if (i < 0 || j < 0) continue;
    DiversityComparison cmp;
    cmp.diverse = diverse;
    cmp.repetition = repetition;
    cmp.diverse_wins.resize(table.load_grid.size());
    for (std::size_t g = 0; g < table.load_grid.size(); ++g)
      cmp.diverse_wins[g] = table.p_hat[i][g] > table.p_hat[j][g];
    out.push_back(std::move(cmp));
  }
  return out;
}

}  // namespace aoimf
