#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ntnsplit/commands.hpp"
#include "ntnsplit/scenario.hpp"
#include "ntnsplit/version.hpp"

using namespace ntnsplit;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int count_lines(const std::string& text, bool data_only) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (data_only && (line.empty() || line[0] == '#')) continue;
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("oracle command writes a deterministic day table") {
  const fs::path dir = fresh_dir("ntnsplit_cmd_oracle");
  RunConfig cfg;
  cfg.out_dir = dir.string();
  cfg.seed = 11;

  REQUIRE(cmd_oracle(cfg) == kExitOk);
  const std::string first = slurp(dir / "oracle_day.csv");
  // Header comment + column header + 96 rows.
  CHECK(count_lines(first, false) == 98);
  CHECK(first.rfind("# " + std::string(kToolName), 0) == 0);
  CHECK(first.find("seed=11") != std::string::npos);
  CHECK(first.find("config_hash=") != std::string::npos);
  CHECK(first.find("INFEASIBLE") == std::string::npos);  // defaults always solvable

  REQUIRE(cmd_oracle(cfg) == kExitOk);
  CHECK(slurp(dir / "oracle_day.csv") == first);  // byte-identical rerun

  // A sabotaged scenario makes every step infeasible but still exits 0.
  const fs::path scenario_path = dir / "tight.ini";
  {
    std::ofstream out(scenario_path);
    out << "[platform.SAT]\nlink_capacity_mbps = 0.5\n"
        << "[platform.HAP]\nlink_capacity_mbps = 0.5\n";
  }
  RunConfig tight = cfg;
  tight.scenario_path = scenario_path.string();
  REQUIRE(cmd_oracle(tight) == kExitOk);
  CHECK(slurp(dir / "oracle_day.csv").find("INFEASIBLE") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("config errors exit with status 1") {
  RunConfig cfg;
  cfg.scenario_path = "/nonexistent/nowhere.ini";
  CHECK(cmd_oracle(cfg) == kExitConfigError);

  RunConfig bad_profile;
  bad_profile.profile = "park";
  CHECK(cmd_oracle(bad_profile) == kExitConfigError);

  RunConfig no_weights;  // eval without --weights
  CHECK(cmd_eval(no_weights) == kExitConfigError);

  RunConfig bad_step;
  bad_step.step_minutes = 13;
  CHECK(cmd_train(bad_step) == kExitConfigError);
}

TEST_CASE("train and eval round-trip through the weights file") {
  const fs::path dir = fresh_dir("ntnsplit_cmd_train");
  RunConfig cfg;
  cfg.out_dir = dir.string();
  cfg.seed = 21;
  cfg.episodes = 3;  // enough steps for a handful of updates

  REQUIRE(cmd_train(cfg) == kExitOk);
  const std::string metrics = slurp(dir / "metrics.csv");
  CHECK(count_lines(metrics, true) == 3 + 1);  // header + one row per episode
  CHECK(metrics.find("episode,cumulative_reward,mean_power_w,violation_rate,oracle_match_rate")
        != std::string::npos);

  const std::string norm = slurp(dir / "normalized_power.csv");
  CHECK(count_lines(norm, true) == 3 * 96 + 1);
  CHECK(norm.find("# normalized_power =") != std::string::npos);

  // Normalized power of feasible steps lies in (0, 1].
  {
    std::istringstream in(norm);
    std::string line;
    int feasible_rows = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'e') continue;
      std::vector<std::string> cells;
      std::istringstream row(line);
      std::string cell;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      REQUIRE(cells.size() == 5);
      if (cells[4] != "1") continue;
      ++feasible_rows;
      const double value = std::stod(cells[3]);
      CHECK(value > 0.0);
      CHECK(value <= 1.0 + 1e-12);
    }
    CHECK(feasible_rows > 0);
  }

  REQUIRE(fs::exists(dir / "weights.bin"));

  // Rerun reproduces both CSVs byte for byte.
  REQUIRE(cmd_train(cfg) == kExitOk);
  CHECK(slurp(dir / "metrics.csv") == metrics);
  CHECK(slurp(dir / "normalized_power.csv") == norm);

  RunConfig eval_cfg;
  eval_cfg.out_dir = (dir / "eval").string();
  eval_cfg.seed = 77;
  eval_cfg.weights_path = (dir / "weights.bin").string();
  eval_cfg.eval_days = 2;
  REQUIRE(cmd_eval(eval_cfg) == kExitOk);

  const std::string trace = slurp(dir / "eval" / "eval_trace.csv");
  CHECK(count_lines(trace, true) == 96 + 1);
  CHECK(trace.find("step,minute,lambda_mbps,platform,option,power_w,latency_ms,tra_mbps,"
                   "feasible,reward,oracle_platform,oracle_option,oracle_power_w,match")
        != std::string::npos);
  CHECK(fs::exists(dir / "eval" / "eval_trace_day1.csv"));

  // The match column is consistent: split the row and compare the pairs.
  {
    std::istringstream in(trace);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("step", 0) == 0) continue;
      std::vector<std::string> cells;
      std::istringstream row(line);
      std::string cell;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      REQUIRE(cells.size() == 14);
      const bool same = cells[3] == cells[10] && cells[4] == cells[11];
      CHECK(cells[13] == (same ? "1" : "0"));
    }
  }

  fs::remove_all(dir);
}

TEST_CASE("an external trace overrides the generated day end to end") {
  const fs::path dir = fresh_dir("ntnsplit_cmd_trace");
  const fs::path trace_path = dir / "trace.csv";
  {
    std::ofstream out(trace_path);
    out << "minute,lambda_mbps\n";
    for (int k = 0; k < 12; ++k) out << k * 120 << "," << 40 + 5 * k << "\n";
  }
  RunConfig cfg;
  cfg.out_dir = dir.string();
  cfg.trace_path = trace_path.string();
  cfg.step_minutes = 120;
  REQUIRE(cmd_oracle(cfg) == kExitOk);
  CHECK(count_lines(slurp(dir / "oracle_day.csv"), true) == 12 + 1);
  fs::remove_all(dir);
}

TEST_CASE("episode trace schema without the oracle columns") {
  std::vector<EvalStep> steps(1);
  steps[0].step = 1;
  steps[0].minute = 15.0;
  steps[0].lambda_mbps = 50.0;
  steps[0].assignment = {Platform::Hap, 3};
  steps[0].power_w = 44.6;
  steps[0].latency_ms = 0.0667;
  steps[0].tra_mbps = 2500.0;
  steps[0].feasible = true;
  steps[0].reward = 3.55;

  std::ostringstream out;
  write_episode_trace(out, steps, /*with_oracle=*/false, "# test");
  const std::string text = out.str();
  CHECK(text.find("step,minute,lambda_mbps,platform,option,power_w,latency_ms,tra_mbps,"
                  "feasible,reward\n") != std::string::npos);
  CHECK(text.find("1,15,50,HAP,3,44.6,0.0667,2500,1,3.55\n") != std::string::npos);
  CHECK(text.find("oracle") == std::string::npos);
}

TEST_CASE("normalized power definition survives in resolve helpers") {
  RunConfig cfg;
  CHECK(resolve_reward(cfg).beta_power == 1.0);
  cfg.constraint_only_reward = true;
  CHECK(resolve_reward(cfg).beta_power == 0.0);

  const ScenarioParams scenario = resolve_scenario(cfg);
  const std::uint64_t h1 = config_hash(cfg, scenario);
  cfg.seed = 999;
  CHECK(config_hash(cfg, scenario) != h1);
}
