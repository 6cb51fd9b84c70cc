#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ntnsplit/env.hpp"
#include "ntnsplit/qlearn.hpp"

namespace ntnsplit {

// Exit-status convention shared by all subcommands.
constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

// Resolved settings of one tool invocation.
struct RunConfig {
  std::string scenario_path;  // empty = built-in defaults
  std::string profile = "business";
  std::string trace_path;  // optional external traffic trace CSV
  std::string out_dir = ".";
  std::string weights_path;  // eval input; train output override
  std::uint64_t seed = 1;
  int episodes = 300;
  int eval_days = 1;
  int step_minutes = 15;
  bool constraint_only_reward = false;  // reward without the power term (beta = 0)
  bool mask_actions = false;
  bool target_network = false;
};

/// Scenario resolved from the config (file or defaults).
ScenarioParams resolve_scenario(const RunConfig& config);

/// Reward configuration implied by the mode flags.
RewardConfig resolve_reward(const RunConfig& config);

/// Fingerprint of every setting that influences outputs; recorded in the
/// header comment of each CSV so reruns can be matched to their config.
std::uint64_t config_hash(const RunConfig& config, const ScenarioParams& scenario);

/// Episode trace in the environment schema; with_oracle appends the solver
/// comparison columns (oracle_platform, oracle_option, oracle_power_w, match).
void write_episode_trace(std::ostream& out, const std::vector<EvalStep>& steps,
                         bool with_oracle, const std::string& header_comment);

// Subcommands. Each returns an exit status and reports problems on stderr:
// 0 success, 1 configuration error, 2 runtime/IO error.

/// Exact solver swept over one day of traffic; writes <out>/oracle_day.csv
/// and prints a one-line summary (mean power, option histogram).
int cmd_oracle(const RunConfig& config);

/// DQN training; writes <out>/metrics.csv, <out>/normalized_power.csv and
/// the final weights file.
int cmd_train(const RunConfig& config);

/// Greedy evaluation of stored weights on held-out days; writes
/// <out>/eval_trace.csv (plus _day<k> suffixes for extra days) and prints
/// the aggregate report.
int cmd_eval(const RunConfig& config);

}  // namespace ntnsplit
