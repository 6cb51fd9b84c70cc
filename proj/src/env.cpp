#include "ntnsplit/env.hpp"

#include <algorithm>
#include <stdexcept>

#include "ntnsplit/rng.hpp"

namespace ntnsplit {

int action_index(const Action& action) {
  return static_cast<int>(action.split_move) * 2 + static_cast<int>(action.ran_choice);
}

Action action_from_index(int index) {
  if (index < 0 || index >= kActionCount) {
    throw std::out_of_range("action index out of range");
  }
  return Action{static_cast<SplitMove>(index / 2), static_cast<RanChoice>(index % 2)};
}

Assignment apply_action(const Assignment& assignment, const Action& action) {
  int delta = action.split_move == SplitMove::Up    ? 1
              : action.split_move == SplitMove::Down ? -1
                                                     : 0;
  Assignment next = assignment;
  next.option = std::clamp(assignment.option + delta, 0, kSplitOptionCount - 1);
  if (action.ran_choice == RanChoice::Switch) {
    next.platform = assignment.platform == Platform::Sat ? Platform::Hap : Platform::Sat;
  }
  return next;
}

double compute_reward(const FeasibilityReport& report, double power_w,
                      const RewardConfig& config) {
  const bool ok[4] = {report.latency_ok, report.traffic_ok, report.node_comp_ok,
                      report.gateway_comp_ok};
  double reward = 0.0;
  for (int j = 0; j < 4; ++j) {
    reward += ok[j] ? config.alpha[static_cast<size_t>(j)] : -config.alpha[static_cast<size_t>(j)];
  }
  reward -= config.beta_power * power_w / config.power_ref_w;
  return reward;
}

Eigen::VectorXd build_feature_vector(const EnvState& s) {
  Eigen::VectorXd f(kFeatureCount);
  f << s.option_id / 3.0,
      static_cast<double>(s.platform_id),
      s.tra_mbps / 2500.0,
      s.latency_limit_ms / 30.0,
      s.lambda_ru_mbps / 2500.0,
      s.total_power_w / 100.0,
      s.total_latency_ms / 30.0,
      s.link_capacity_mbps / 2500.0,
      gops_to_tops(s.node_comp_gops) / 1.48,
      gops_to_tops(s.gateway_comp_gops) / 1.48,
      s.node_comp_max_tops / 32.0;
  return f;
}

Environment::Environment(ScenarioParams scenario, TrafficProfile profile,
                         RewardConfig reward, int step_minutes,
                         int steps_per_episode)
    : scenario_(std::move(scenario)),
      profile_(profile),
      reward_(reward),
      step_minutes_(step_minutes),
      steps_per_episode_(steps_per_episode) {
  if (steps_per_episode_ <= 0) {
    throw std::invalid_argument("steps_per_episode must be positive");
  }
}

EnvState Environment::make_state(const Assignment& a, double lambda, int n) const {
  const PlatformParams& node = scenario_.platform(a.platform);
  const SplitOption& option = split_option(a.option);
  EnvState s;
  s.option_id = a.option;
  s.platform_id = static_cast<int>(a.platform);
  s.tra_mbps = traffic_demand(option, lambda);
  s.latency_limit_ms = option.latency_limit_ms;
  s.lambda_ru_mbps = lambda;
  s.total_power_w = total_power_w(a, lambda, scenario_);
  s.total_latency_ms = propagation_latency_ms(node, scenario_.speed_of_light_m_per_s);
  s.link_capacity_mbps = node.link_capacity_mbps;
  s.node_comp_gops = node_comp_load_gops(option, scenario_.loads);
  s.gateway_comp_gops = gateway_comp_load_gops(option, scenario_.loads);
  s.node_comp_max_tops = node.comp_max_tops;
  s.step_index = n;
  return s;
}

EnvState Environment::reset(std::uint64_t seed) {
  Rng rng(Rng::mix(seed, 0x1a11));
  Assignment initial{static_cast<Platform>(rng.uniform_int(kPlatformCount)),
                     rng.uniform_int(kSplitOptionCount)};
  return reset_with(initial, seed);
}

EnvState Environment::reset_with(const Assignment& initial, std::uint64_t seed) {
  if (!forced_series_.empty()) {
    series_ = forced_series_;
  } else {
    TrafficProfile p = profile_;
    p.seed = Rng::mix(seed, 0x7d0b);
    series_ = generate_day(p, step_minutes_);
  }
  assignment_ = initial;
  state_ = make_state(assignment_, lambda_at(0), 0);
  initialized_ = true;
  return state_;
}

void Environment::set_series(std::vector<double> series) {
  if (series.empty()) throw std::invalid_argument("traffic series is empty");
  forced_series_ = std::move(series);
  if (initialized_) {
    series_ = forced_series_;
    state_ = make_state(assignment_, lambda_at(state_.step_index), state_.step_index);
  }
}

double Environment::minute_at(int n) const {
  return static_cast<double>((static_cast<size_t>(n) % series_.size()) * step_minutes_);
}

Environment::StepResult Environment::step(const Action& action) {
  if (!initialized_) throw std::logic_error("step() before reset()");
  if (done()) throw std::logic_error("step() on a finished episode");

  const int next_n = state_.step_index + 1;
  Eigen::VectorXd old_features = build_feature_vector(state_);

  assignment_ = apply_action(assignment_, action);
  const double lambda = lambda_at(next_n);
  state_ = make_state(assignment_, lambda, next_n);

  FeasibilityReport report = check_feasibility(assignment_, lambda, scenario_);
  const double power = state_.total_power_w;
  const double reward = compute_reward(report, power, reward_);

  StepResult result;
  result.features = build_feature_vector(state_);
  result.reward = reward;
  result.done = next_n >= steps_per_episode_;

  Transition& t = result.transition;
  t.state = std::move(old_features);
  t.action = action_index(action);
  t.reward = reward;
  t.next_state = result.features;
  t.done = result.done;
  t.lambda_mbps = lambda;
  t.assignment = assignment_;
  t.power_w = power;
  t.report = report;
  t.step = next_n;
  return result;
}

}  // namespace ntnsplit
