#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "aoimf/errors.hpp"
#include "aoimf/success_table.hpp"
#include "doctest.h"

using namespace aoimf;
namespace fs = std::filesystem;

namespace {

SystemConfig desk_config(bool fading = false) {
  SystemConfig cfg;
  cfg.pools = 3;
  cfg.slots = 3;
  cfg.frame_time = 1.0;
  cfg.packet_time = 0.25;
  cfg.noise_power = 0.5;
  cfg.sinr_threshold = 2.0;
  cfg.residual_factor = 0.05;
  cfg.rician_k = fading ? 10.0 : -1.0;
  cfg.rx_power = 1.0;
  cfg.max_reps = 3;
  return cfg;
}

SuccessTable two_point_table() {
  SuccessTable t;
  t.load_grid = {2.0, 4.0};
  t.actions = {{0, 0}, {1, 1}};
  t.p_hat = {{0.0, 0.0}, {0.9, 0.7}};
  t.trials = 1;
  return t;
}

}  // namespace

TEST_CASE("calibrate_table structure and exact zero-load rows") {
  const SystemConfig cfg = desk_config();
  const SuccessTable t = calibrate_table(cfg, {0.0, 2.0, 4.0}, 300, 7);
  CHECK(t.actions.size() == 10);  // idle + 3x3
  CHECK(t.load_grid.size() == 3);
  CHECK(t.trials == 300);

  for (std::size_t g = 0; g < t.load_grid.size(); ++g)
    CHECK(t.p_hat[0][g] == 0.0);  // idle row exactly zero
  for (std::size_t a = 0; a < t.actions.size(); ++a)
    for (std::size_t g = 0; g < t.load_grid.size(); ++g) {
      CHECK(t.p_hat[a][g] >= 0.0);
      CHECK(t.p_hat[a][g] <= 1.0);
    }
  // Single-replica actions capture with certainty at zero load (no fading,
  // rx_power/noise == threshold).
  for (Action a : {Action{1, 1}, Action{1, 2}, Action{1, 3}})
    CHECK(t.p_hat[t.action_index(a)][0] == 1.0);
}

TEST_CASE("calibration is byte-identical for any thread count") {
  const SystemConfig cfg = desk_config();
  const SuccessTable a = calibrate_table(cfg, {0.0, 4.0}, 50, 13, 1);
  const SuccessTable b = calibrate_table(cfg, {0.0, 4.0}, 50, 13, 4);
  REQUIRE(a.p_hat.size() == b.p_hat.size());
  for (std::size_t i = 0; i < a.p_hat.size(); ++i)
    for (std::size_t g = 0; g < a.load_grid.size(); ++g)
      CHECK(a.p_hat[i][g] == b.p_hat[i][g]);
}

TEST_CASE("doubling trials moves entries by at most the binomial bound") {
  const SystemConfig cfg = desk_config(true);
  const long trials = 1000;
  const SuccessTable t1 = calibrate_table(cfg, {0.0, 8.0, 16.0}, trials, 29);
  const SuccessTable t2 = calibrate_table(cfg, {0.0, 8.0, 16.0}, 2 * trials, 29);
  for (std::size_t a = 0; a < t1.actions.size(); ++a) {
    for (std::size_t g = 0; g < t1.load_grid.size(); ++g) {
      const double p = t2.p_hat[a][g];
      const double bound = 3.0 * std::sqrt(p * (1.0 - p) / trials) + 1e-12;
      CHECK(std::abs(t1.p_hat[a][g] - p) <= bound);
    }
  }
}

TEST_CASE("success_prob interpolation") {
  const SuccessTable t = two_point_table();
  CHECK(success_prob(t, {0, 0}, 17.0) == 0.0);
  CHECK(success_prob(t, {1, 1}, 3.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(success_prob(t, {1, 1}, 30.0) == 0.7);  // clamps above
  CHECK(success_prob(t, {1, 1}, 0.0) == 0.9);   // clamps below
  CHECK_THROWS_AS(success_prob(t, {3, 3}, 2.0), std::invalid_argument);
}

TEST_CASE("interpolation stays within the bracketing entries") {
  SuccessTable t;
  t.load_grid = {0.0, 1.0, 2.5, 7.0};
  t.actions = {{0, 0}, {1, 1}};
  t.p_hat = {{0, 0, 0, 0}, {0.95, 0.4, 0.55, 0.1}};
  t.trials = 1;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 7.0);
  for (int i = 0; i < 500; ++i) {
    const double lambda = u(rng);
    const double p = success_prob(t, {1, 1}, lambda);
    auto hi = std::upper_bound(t.load_grid.begin(), t.load_grid.end(), lambda);
    if (hi == t.load_grid.begin() || hi == t.load_grid.end()) continue;
    const std::size_t h = hi - t.load_grid.begin();
    const double lo_p = t.p_hat[1][h - 1], hi_p = t.p_hat[1][h];
    CHECK(p >= std::min(lo_p, hi_p) - 1e-12);
    CHECK(p <= std::max(lo_p, hi_p) + 1e-12);
  }
}

TEST_CASE("save/load round trip is exact") {
  const SystemConfig cfg = desk_config();
  const SuccessTable t = calibrate_table(cfg, {0.0, 2.0, 4.0}, 137, 11);
  const fs::path path = fs::temp_directory_path() / "aoimf_table_roundtrip.csv";
  save_table(t, path);
  const SuccessTable r = load_table(path);

  CHECK(r.seed == t.seed);
  CHECK(r.cfg_digest == t.cfg_digest);
  CHECK(r.trials == t.trials);
  REQUIRE(r.load_grid == t.load_grid);
  REQUIRE(r.actions == t.actions);
  for (std::size_t a = 0; a < t.actions.size(); ++a)
    for (std::size_t g = 0; g < t.load_grid.size(); ++g)
      CHECK(r.p_hat[a][g] == t.p_hat[a][g]);  // bit-exact
  CHECK(digest_matches(r, cfg));

  // 10 actions x 3 loads -> 30 data rows + header + 3 comment lines.
  std::ifstream is(path);
  std::string line;
  int rows = 0, comments = 0, headers = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') ++comments;
    else if (line == "lambda,d,q,p_hat,trials") ++headers;
    else ++rows;
  }
  CHECK(rows == 30);
  CHECK(headers == 1);
  CHECK(comments >= 2);
  fs::remove(path);
}

TEST_CASE("corrupt table files are rejected") {
  const SystemConfig cfg = desk_config();
  const SuccessTable t = calibrate_table(cfg, {0.0, 2.0}, 40, 3);
  const fs::path good = fs::temp_directory_path() / "aoimf_table_good.csv";
  save_table(t, good);

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_table(fs::temp_directory_path() / "nope.csv"), io_error);
  }
  SUBCASE("truncated file") {
    std::ifstream is(good);
    std::stringstream all;
    all << is.rdbuf();
    std::string text = all.str();
    text.resize(text.size() * 2 / 3);  // chop inside the second block
    const fs::path bad = fs::temp_directory_path() / "aoimf_table_trunc.csv";
    std::ofstream(bad) << text;
    CHECK_THROWS_AS(load_table(bad), io_error);
    fs::remove(bad);
  }
  SUBCASE("wrong header") {
    const fs::path bad = fs::temp_directory_path() / "aoimf_table_hdr.csv";
    std::ofstream(bad) << "lambda,d,q,p\n0,1,1,0.5\n";
    CHECK_THROWS_AS(load_table(bad), io_error);
    fs::remove(bad);
  }
  SUBCASE("probability outside [0,1]") {
    const fs::path bad = fs::temp_directory_path() / "aoimf_table_range.csv";
    std::ofstream(bad) << "lambda,d,q,p_hat,trials\n0,1,1,1.5,10\n";
    CHECK_THROWS_AS(load_table(bad), io_error);
    fs::remove(bad);
  }
  fs::remove(good);
}

TEST_CASE("congestion monotonicity holds on a calibrated table") {
  const SystemConfig cfg = desk_config();
  const SuccessTable t = calibrate_table(cfg, {0.0, 6.0, 12.0, 18.0, 24.0}, 2000, 19);
  const auto violations = congestion_monotonicity_violations(t);
  CHECK(violations.empty());
}

TEST_CASE("diversity dominance report covers the transposed pairs") {
  const SystemConfig cfg = desk_config();
  const SuccessTable t = calibrate_table(cfg, {0.0, 8.0}, 2000, 23);
  const auto report = diversity_dominance_report(t);
  REQUIRE(report.size() == 3);  // (1,2)/(2,1), (1,3)/(3,1), (2,3)/(3,2)
  for (const auto& cmp : report) {
    CHECK(cmp.diverse.q > cmp.diverse.d);
    CHECK(cmp.diverse.energy() == cmp.repetition.energy());
    CHECK(cmp.diverse_wins.size() == t.load_grid.size());
  }
  // At zero load the single-replica-per-pool variant captures surely while
  // the repetition variant can self-collide, so diversity must win.
  for (const auto& cmp : report)
    if (cmp.diverse == Action{1, 2}) CHECK(cmp.diverse_wins[0]);
}

TEST_CASE("calibrate_table input validation") {
  const SystemConfig cfg = desk_config();
  CHECK_THROWS_AS(calibrate_table(cfg, {}, 10, 1), config_error);
  CHECK_THROWS_AS(calibrate_table(cfg, {0.0, 0.0}, 10, 1), config_error);
  CHECK_THROWS_AS(calibrate_table(cfg, {0.0, 2.0}, 0, 1), config_error);
  CHECK_THROWS_AS(calibrate_table(cfg, {-1.0, 2.0}, 10, 1), config_error);
}
