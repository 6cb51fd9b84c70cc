#include "ntnsplit/commands.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ntnsplit/scenario.hpp"
#include "ntnsplit/solver.hpp"
#include "ntnsplit/traffic.hpp"
#include "ntnsplit/version.hpp"

namespace ntnsplit {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  return out;
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());
  return dir;
}

std::string header_comment(const RunConfig& cfg, const ScenarioParams& scenario) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg, scenario)));
  std::ostringstream out;
  out << "# " << kToolName << " " << kToolVersion << " seed=" << cfg.seed
      << " config_hash=" << buf;
  return out.str();
}

std::vector<double> resolve_series(const RunConfig& cfg, std::uint64_t day_seed) {
  if (!cfg.trace_path.empty()) return load_trace_csv(cfg.trace_path);
  TrafficProfile profile = profile_by_name(cfg.profile);
  profile.seed = day_seed;
  return generate_day(profile, cfg.step_minutes);
}

Environment make_env(const RunConfig& cfg, const ScenarioParams& scenario) {
  if (cfg.step_minutes <= 0 || 1440 % cfg.step_minutes != 0) {
    throw ConfigError("step minutes must divide 1440");
  }
  Environment env(scenario, profile_by_name(cfg.profile), resolve_reward(cfg),
                  cfg.step_minutes, 1440 / cfg.step_minutes);
  if (!cfg.trace_path.empty()) env.set_series(load_trace_csv(cfg.trace_path));
  return env;
}

int guard(const char* what, int (*body)(const RunConfig&), const RunConfig& cfg) {
  try {
    return body(cfg);
  } catch (const ConfigError& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return kExitConfigError;
  } catch (const WeightsError& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

}  // namespace

ScenarioParams resolve_scenario(const RunConfig& cfg) {
  return cfg.scenario_path.empty() ? default_scenario() : load_scenario(cfg.scenario_path);
}

RewardConfig resolve_reward(const RunConfig& cfg) {
  RewardConfig reward;
  if (cfg.constraint_only_reward) reward.beta_power = 0.0;
  return reward;
}

std::uint64_t config_hash(const RunConfig& cfg, const ScenarioParams& scenario) {
  std::ostringstream blob;
  blob << scenario_to_string(scenario) << "profile=" << cfg.profile
       << " trace=" << cfg.trace_path << " seed=" << cfg.seed
       << " episodes=" << cfg.episodes << " eval_days=" << cfg.eval_days
       << " step_minutes=" << cfg.step_minutes
       << " constraint_only=" << cfg.constraint_only_reward
       << " mask=" << cfg.mask_actions << " target_net=" << cfg.target_network;
  return fnv1a64(blob.str());
}

void write_episode_trace(std::ostream& out, const std::vector<EvalStep>& steps,
                         bool with_oracle, const std::string& comment) {
  out << comment << "\n";
  out << "step,minute,lambda_mbps,platform,option,power_w,latency_ms,tra_mbps,feasible,reward";
  if (with_oracle) out << ",oracle_platform,oracle_option,oracle_power_w,match";
  out << "\n";
  for (const EvalStep& e : steps) {
    out << e.step << "," << fmt(e.minute) << "," << fmt(e.lambda_mbps) << ","
        << platform_name(e.assignment.platform) << "," << e.assignment.option << ","
        << fmt(e.power_w) << "," << fmt(e.latency_ms) << "," << fmt(e.tra_mbps) << ","
        << (e.feasible ? 1 : 0) << "," << fmt(e.reward);
    if (with_oracle) {
      if (e.oracle_assignment) {
        out << "," << platform_name(e.oracle_assignment->platform) << ","
            << e.oracle_assignment->option << "," << fmt(e.oracle_power_w) << ","
            << (e.match ? 1 : 0);
      } else {
        out << ",,,,0";
      }
    }
    out << "\n";
  }
}

namespace {

int run_oracle(const RunConfig& cfg) {
  const ScenarioParams scenario = resolve_scenario(cfg);
  const std::vector<double> series = resolve_series(cfg, Rng::mix(cfg.seed, 0x7d0b));
  const std::filesystem::path dir = prepare_out_dir(cfg);

  std::ofstream out = open_output(dir / "oracle_day.csv");
  out << header_comment(cfg, scenario) << "\n";
  out << "step,minute,lambda_mbps,platform,option,power_w,status";
  for (const Assignment& a : enumerate_assignments()) {
    out << ",feas_" << platform_name(a.platform) << a.option;
  }
  out << "\n";

  double power_sum = 0.0;
  int feasible_steps = 0;
  std::array<int, kSplitOptionCount> option_histogram{};
  int infeasible_steps = 0;

  for (size_t k = 0; k < series.size(); ++k) {
    SolveResult solved = solve_optimal(series[k], scenario);
    out << k << "," << fmt(static_cast<double>(k) * cfg.step_minutes) << ","
        << fmt(series[k]) << ",";
    if (solved.feasible()) {
      out << platform_name(solved.best->platform) << "," << solved.best->option << ","
          << fmt(solved.best_power_w) << ",OK";
      power_sum += solved.best_power_w;
      ++feasible_steps;
      ++option_histogram[static_cast<size_t>(solved.best->option)];
    } else {
      out << ",,,INFEASIBLE";
      ++infeasible_steps;
    }
    // Candidate feasibility flags in enumeration order.
    std::array<int, kPlatformCount * kSplitOptionCount> flags{};
    for (const CandidateEval& c : solved.ranked) {
      flags[static_cast<size_t>(static_cast<int>(c.assignment.platform) * kSplitOptionCount +
                                c.assignment.option)] = c.report.feasible() ? 1 : 0;
    }
    for (int f : flags) out << "," << f;
    out << "\n";
  }

  std::cout << "oracle: steps=" << series.size() << " feasible=" << feasible_steps
            << " infeasible=" << infeasible_steps << " mean_power_w="
            << fmt(feasible_steps > 0 ? power_sum / feasible_steps : 0.0)
            << " option_histogram=";
  for (int o = 0; o < kSplitOptionCount; ++o) {
    std::cout << (o == 0 ? "" : "/") << option_histogram[static_cast<size_t>(o)];
  }
  std::cout << "\n";
  return kExitOk;
}

int run_train(const RunConfig& cfg) {
  const ScenarioParams scenario = resolve_scenario(cfg);
  Environment env = make_env(cfg, scenario);

  TrainConfig train_cfg;
  train_cfg.episodes = cfg.episodes;
  train_cfg.seed = cfg.seed;
  train_cfg.use_target_network = cfg.target_network;
  train_cfg.mask_infeasible = cfg.mask_actions;

  TrainResult result = train(env, train_cfg);

  const std::filesystem::path dir = prepare_out_dir(cfg);
  const std::string comment = header_comment(cfg, scenario);

  {
    std::ofstream out = open_output(dir / "metrics.csv");
    out << comment << "\n";
    out << "episode,cumulative_reward,mean_power_w,violation_rate,oracle_match_rate\n";
    for (const EpisodeMetrics& m : result.episodes) {
      out << m.episode << "," << fmt(m.cumulative_reward) << "," << fmt(m.mean_power_w)
          << "," << fmt(m.violation_rate) << "," << fmt(m.oracle_match_rate) << "\n";
    }
  }
  {
    std::ofstream out = open_output(dir / "normalized_power.csv");
    out << comment << "\n";
    out << "# normalized_power = agent power / max feasible assignment power at the same step\n";
    out << "episode,step,power_w,normalized_power,feasible\n";
    for (const StepRecord& s : result.steps) {
      out << s.episode << "," << s.step << "," << fmt(s.power_w) << ","
          << fmt(s.normalized_power) << "," << (s.feasible ? 1 : 0) << "\n";
    }
  }

  const std::filesystem::path weights_path =
      cfg.weights_path.empty() ? dir / "weights.bin" : std::filesystem::path(cfg.weights_path);
  result.net.save(weights_path.string());

  const EpisodeMetrics& last = result.episodes.back();
  std::cout << "train: episodes=" << cfg.episodes << " updates=" << result.total_updates
            << " final_reward=" << fmt(last.cumulative_reward)
            << " final_match_rate=" << fmt(last.oracle_match_rate)
            << " weights=" << weights_path.string() << "\n";
  return kExitOk;
}

int run_eval(const RunConfig& cfg) {
  if (cfg.weights_path.empty()) throw ConfigError("eval requires --weights");
  const ScenarioParams scenario = resolve_scenario(cfg);
  QNetwork net = QNetwork::load(cfg.weights_path);
  Environment env = make_env(cfg, scenario);

  const std::filesystem::path dir = prepare_out_dir(cfg);
  const std::string comment = header_comment(cfg, scenario);

  long matches = 0, oracle_steps = 0, violations = 0, total_steps = 0;
  double power_sum = 0.0, oracle_power_sum = 0.0;

  for (int day = 0; day < cfg.eval_days; ++day) {
    std::vector<EvalStep> trace =
        run_greedy_day(env, net, Rng::mix(cfg.seed, 0xe7a1 + static_cast<std::uint64_t>(day)));
    for (const EvalStep& e : trace) {
      ++total_steps;
      power_sum += e.power_w;
      if (!e.feasible) ++violations;
      if (e.oracle_assignment) {
        ++oracle_steps;
        oracle_power_sum += e.oracle_power_w;
        if (e.match) ++matches;
      }
    }
    std::string name = day == 0 ? "eval_trace.csv" : "eval_trace_day" + std::to_string(day) + ".csv";
    std::ofstream out = open_output(dir / name);
    write_episode_trace(out, trace, /*with_oracle=*/true, comment);
  }

  const double match_rate = oracle_steps > 0 ? static_cast<double>(matches) / oracle_steps : 0.0;
  const double power_ratio = oracle_power_sum > 0.0 ? power_sum / oracle_power_sum : 0.0;
  std::cout << "eval: days=" << cfg.eval_days << " steps=" << total_steps
            << " oracle_match=" << fmt(100.0 * match_rate) << "%"
            << " mean_power_w=" << fmt(total_steps > 0 ? power_sum / total_steps : 0.0)
            << " power_ratio_vs_oracle=" << fmt(power_ratio)
            << " violation_rate=" << fmt(total_steps > 0 ? static_cast<double>(violations) / total_steps : 0.0)
            << "\n";
  return kExitOk;
}

}  // namespace

int cmd_oracle(const RunConfig& cfg) { return guard("oracle", run_oracle, cfg); }
int cmd_train(const RunConfig& cfg) { return guard("train", run_train, cfg); }
int cmd_eval(const RunConfig& cfg) { return guard("eval", run_eval, cfg); }

}  // namespace ntnsplit
