#pragma once

#include <cmath>
#include <deque>
#include <optional>
#include <vector>

#include "ntnsplit/env.hpp"
#include "ntnsplit/qnet.hpp"
#include "ntnsplit/rng.hpp"
#include "ntnsplit/solver.hpp"

namespace ntnsplit {

// Exponential-decay exploration rate with a floor:
// epsilon(n) = max(floor, initial * decay^n).
struct EpsilonSchedule {
  double initial = 0.5;
  double decay = 0.995;
  double floor = 0.0005;

  double value(long step) const {
    return std::max(floor, initial * std::pow(decay, static_cast<double>(step)));
  }
};

// FIFO experience store: once full, each push evicts the oldest transition.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity = 200);

  void push(Transition t);
  size_t size() const { return storage_.size(); }
  size_t capacity() const { return capacity_; }
  const Transition& at(size_t i) const { return storage_[i]; }  // oldest first

  /// Uniform sample of n distinct transitions. Pointers stay valid until the
  /// next push.
  std::vector<const Transition*> sample(size_t n, Rng& rng) const;

 private:
  size_t capacity_;
  std::deque<Transition> storage_;
};

struct RmsPropConfig {
  double learning_rate = 1e-3;
  double rho = 0.9;
  double eps = 1e-8;
};

// Root-mean-square gradient scaling:
//   v <- rho * v + (1 - rho) * g^2
//   w <- w - lr * g / (sqrt(v) + eps)
class RmsProp {
 public:
  RmsProp(const QNetwork& net, RmsPropConfig config);

  void update(QNetwork& net, const QNetwork::Gradients& gradients);

  const QNetwork::Gradients& mean_square() const { return v_; }

 private:
  RmsPropConfig config_;
  QNetwork::Gradients v_;  // running mean of squared gradients
};

/// Lowest-index argmax over Q-values.
int greedy_action(const Eigen::VectorXd& q_values);

/// Epsilon-greedy: with probability epsilon a uniform action, otherwise the
/// greedy one.
int act(const QNetwork& net, const Eigen::VectorXd& features, double epsilon, Rng& rng);

/// One-step TD targets: r + gamma * max_a Q(s', a), or r alone at terminal
/// transitions.
Eigen::VectorXd td_targets(const std::vector<const Transition*>& batch,
                           const QNetwork& net, double gamma);

struct TrainConfig {
  int minibatch_size = 100;
  size_t replay_capacity = 200;
  double gamma = 0.9;
  RmsPropConfig rmsprop;
  EpsilonSchedule epsilon;
  int episodes = 300;
  std::uint64_t seed = 1;
  QNetworkShape shape;
  bool use_target_network = false;  // plain DQN by default
  int target_sync_every = 500;      // updates between target refreshes
  bool mask_infeasible = false;     // restrict actions to feasible successors
};

struct EpisodeMetrics {
  int episode = 0;
  double cumulative_reward = 0.0;
  double mean_power_w = 0.0;
  double violation_rate = 0.0;     // fraction of steps with any constraint violated
  double oracle_match_rate = 0.0;  // fraction of steps matching the exact solver
};

// Per-step record kept for the normalized-power output: agent power divided
// by the most expensive feasible assignment at the same step.
struct StepRecord {
  int episode = 0;
  int step = 0;
  double power_w = 0.0;
  double normalized_power = 0.0;
  bool feasible = false;
};

struct TrainResult {
  QNetwork net;
  std::vector<EpisodeMetrics> episodes;
  std::vector<StepRecord> steps;
  long total_updates = 0;
};

/// Runs the full training loop on the environment: epsilon-greedy rollout,
/// FIFO replay, uniform minibatch sampling without replacement, one RMSprop
/// update per step once the buffer can fill a minibatch. Deterministic for a
/// fixed config.
TrainResult train(Environment& env, const TrainConfig& config);

// One evaluated step of a greedy rollout, with the exact solver's choice at
// the same traffic value alongside.
struct EvalStep {
  int step = 0;
  double minute = 0.0;
  double lambda_mbps = 0.0;
  Assignment assignment;
  double power_w = 0.0;
  double latency_ms = 0.0;
  double tra_mbps = 0.0;
  bool feasible = false;
  double reward = 0.0;
  std::optional<Assignment> oracle_assignment;
  double oracle_power_w = 0.0;
  bool match = false;
};

/// Greedy (epsilon = 0) rollout over one episode after env.reset(seed).
std::vector<EvalStep> run_greedy_day(Environment& env, const QNetwork& net,
                                     std::uint64_t seed);

}  // namespace ntnsplit
