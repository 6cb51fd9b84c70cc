#include <CLI11.hpp>

#include "ntnsplit/commands.hpp"
#include "ntnsplit/version.hpp"

using ntnsplit::RunConfig;

namespace {

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--config", cfg.scenario_path, "Scenario file (defaults built in)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--profile", cfg.profile, "Traffic profile: business|residential")
      ->check(CLI::IsMember({"business", "residential"}));
  cmd->add_option("--trace", cfg.trace_path, "External traffic trace CSV (minute,lambda_mbps)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", cfg.seed, "Random seed recorded in every output");
  cmd->add_option("--out", cfg.out_dir, "Output directory");
  cmd->add_option("--step-minutes", cfg.step_minutes, "Trace resolution in minutes");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-optimal functional-split selection for NTN-hosted RAN "
               "(exact solver + DQN agent)"};
  app.set_version_flag("--version", std::string(ntnsplit::kToolVersion));
  app.require_subcommand(1);

  RunConfig cfg;

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Sweep the exact solver over one day and emit the decision table");
  add_common_options(oracle, cfg);

  CLI::App* train = app.add_subcommand("train", "Train the DQN agent and store weights");
  add_common_options(train, cfg);
  train->add_option("--episodes", cfg.episodes, "Training episodes (days)");
  train->add_option("--weights", cfg.weights_path, "Weights output path");
  train->add_flag("--paper-faithful-reward", cfg.constraint_only_reward,
                  "Drop the power-shaping reward term (constraint terms only)");
  train->add_flag("--mask-actions", cfg.mask_actions,
                  "Restrict exploration to actions with feasible successors");
  train->add_flag("--target-network", cfg.target_network,
                  "Bootstrap TD targets from a periodically synced copy");

  CLI::App* eval = app.add_subcommand("eval", "Greedy evaluation of stored weights");
  add_common_options(eval, cfg);
  eval->add_option("--weights", cfg.weights_path, "Weights file to evaluate")->required();
  eval->add_option("--episodes", cfg.eval_days, "Held-out days to evaluate");
  eval->add_flag("--paper-faithful-reward", cfg.constraint_only_reward,
                 "Report rewards without the power-shaping term");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : ntnsplit::kExitConfigError;
  }

  if (oracle->parsed()) return ntnsplit::cmd_oracle(cfg);
  if (train->parsed()) return ntnsplit::cmd_train(cfg);
  return ntnsplit::cmd_eval(cfg);
}
