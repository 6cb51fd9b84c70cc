#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "ntnsplit/cost_model.hpp"
#include "ntnsplit/traffic.hpp"

namespace ntnsplit {

constexpr int kFeatureCount = 11;
constexpr int kActionCount = 6;

// Raw observation at one time step: the active assignment, the traffic load
// and every derived quantity the controller can see.
struct EnvState {
  int option_id = 0;
  int platform_id = 0;  // 0 = SAT, 1 = HAP
  double tra_mbps = 0.0;
  double latency_limit_ms = 0.0;
  double lambda_ru_mbps = 0.0;
  double total_power_w = 0.0;
  double total_latency_ms = 0.0;
  double link_capacity_mbps = 0.0;
  double node_comp_gops = 0.0;
  double gateway_comp_gops = 0.0;
  double node_comp_max_tops = 0.0;
  int step_index = 0;
};

enum class SplitMove { Up = 0, Down = 1, Stay = 2 };
enum class RanChoice { Keep = 0, Switch = 1 };

// Two-part action: move the split point and keep/switch the platform. Both
// parts apply within the same step.
struct Action {
  SplitMove split_move = SplitMove::Stay;
  RanChoice ran_choice = RanChoice::Keep;
};

// Fixed bijection between the 6 actions and indices 0..5:
// Up/Keep, Up/Switch, Down/Keep, Down/Switch, Stay/Keep, Stay/Switch.
int action_index(const Action& action);
Action action_from_index(int index);

/// Option moves clamp at the catalogue boundaries; Up means a higher option
/// id (more functions centralized at the CU).
Assignment apply_action(const Assignment& assignment, const Action& action);

// Reward coefficients: one positive weight per constraint term plus an
// optional power-shaping term. beta_power = 0 restores the pure
// constraint-satisfaction reward.
struct RewardConfig {
  std::array<double, 4> alpha = {1.0, 1.0, 1.0, 1.0};
  double beta_power = 1.0;
  double power_ref_w = 100.0;
};

/// Sum over the four constraints of +alpha_j when satisfied and -alpha_j
/// when violated (order: latency, traffic, node compute, gateway compute),
/// minus beta_power * power / power_ref.
double compute_reward(const FeasibilityReport& report, double power_w,
                      const RewardConfig& config);

/// Order-of-one feature vector in the fixed EnvState field order.
Eigen::VectorXd build_feature_vector(const EnvState& state);

// Experience tuple. The metadata fields are enough to recompute the reward.
struct Transition {
  Eigen::VectorXd state;
  int action = 0;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool done = false;

  double lambda_mbps = 0.0;
  Assignment assignment;
  double power_w = 0.0;
  FeasibilityReport report;
  int step = 0;
};

// One-day episodic environment over a traffic series. Each reset draws a
// fresh noisy day and a uniformly random initial assignment from the seed.
class Environment {
 public:
  Environment(ScenarioParams scenario, TrafficProfile profile,
              RewardConfig reward, int step_minutes = 15,
              int steps_per_episode = 96);

  EnvState reset(std::uint64_t seed);
  /// Reset with a fixed initial assignment (evaluation sweeps, tests).
  EnvState reset_with(const Assignment& initial, std::uint64_t seed);

  struct StepResult {
    Eigen::VectorXd features;
    double reward = 0.0;
    bool done = false;
    Transition transition;
  };

  /// Applies the action, advances the traffic clock and rewards the new
  /// assignment at the new traffic value. Throws std::logic_error when the
  /// episode is already finished.
  StepResult step(const Action& action);
  StepResult step(int action_idx) { return step(action_from_index(action_idx)); }

  const EnvState& state() const { return state_; }
  const Assignment& assignment() const { return assignment_; }
  bool done() const { return state_.step_index >= steps_per_episode_; }

  int steps_per_episode() const { return steps_per_episode_; }
  int step_minutes() const { return step_minutes_; }
  const ScenarioParams& scenario() const { return scenario_; }
  const RewardConfig& reward_config() const { return reward_; }
  const std::vector<double>& day_series() const { return series_; }

  /// Replaces the generated day with an external trace (applies to the
  /// current episode and all later resets).
  void set_series(std::vector<double> series);

  double lambda_at(int n) const { return series_[static_cast<size_t>(n) % series_.size()]; }
  double minute_at(int n) const;

 private:
  EnvState make_state(const Assignment& assignment, double lambda, int n) const;

  ScenarioParams scenario_;
  TrafficProfile profile_;
  RewardConfig reward_;
  int step_minutes_;
  int steps_per_episode_;

  std::vector<double> series_;
  std::vector<double> forced_series_;
  Assignment assignment_;
  EnvState state_;
  bool initialized_ = false;
};

}  // namespace ntnsplit
