#include "ntnsplit/qlearn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ntnsplit {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  if (storage_.size() == capacity_) storage_.pop_front();
  storage_.push_back(std::move(t));
}

std::vector<const Transition*> ReplayBuffer::sample(size_t n, Rng& rng) const {
  if (n > storage_.size()) {
    throw std::invalid_argument("cannot sample more transitions than stored");
  }
  // Partial Fisher-Yates over the index range.
  std::vector<size_t> idx(storage_.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::vector<const Transition*> batch;
  batch.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    size_t j = i + static_cast<size_t>(rng.uniform_int(static_cast<int>(idx.size() - i)));
    std::swap(idx[i], idx[j]);
    batch.push_back(&storage_[idx[i]]);
  }
  return batch;
}

RmsProp::RmsProp(const QNetwork& net, RmsPropConfig config)
    : config_(config), v_(net.zero_gradients()) {}

void RmsProp::update(QNetwork& net, const QNetwork::Gradients& g) {
  for (int l = 0; l < QNetwork::kWeightLayers; ++l) {
    const size_t i = static_cast<size_t>(l);
    v_.w[i] = config_.rho * v_.w[i].array() + (1.0 - config_.rho) * g.w[i].array().square();
    v_.b[i] = config_.rho * v_.b[i].array() + (1.0 - config_.rho) * g.b[i].array().square();
    net.weights()[i].array() -=
        config_.learning_rate * g.w[i].array() / (v_.w[i].array().sqrt() + config_.eps);
    net.biases()[i].array() -=
        config_.learning_rate * g.b[i].array() / (v_.b[i].array().sqrt() + config_.eps);
  }
}

int greedy_action(const Eigen::VectorXd& q_values) {
  int best = 0;
  for (int a = 1; a < q_values.size(); ++a) {
    if (q_values(a) > q_values(best)) best = a;
  }
  return best;
}

int act(const QNetwork& net, const Eigen::VectorXd& features, double epsilon, Rng& rng) {
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    return rng.uniform_int(static_cast<int>(net.shape().output_dim));
  }
  return greedy_action(net.forward(features));
}

Eigen::VectorXd td_targets(const std::vector<const Transition*>& batch,
                           const QNetwork& net, double gamma) {
  if (batch.empty()) throw std::invalid_argument("td_targets needs a non-empty batch");
  const Eigen::Index n = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd next_states(net.shape().input_dim, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    next_states.col(k) = batch[static_cast<size_t>(k)]->next_state;
  }
  Eigen::MatrixXd q_next = net.forward(next_states);
  Eigen::VectorXd targets(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Transition& t = *batch[static_cast<size_t>(k)];
    targets(k) = t.done ? t.reward : t.reward + gamma * q_next.col(k).maxCoeff();
  }
  return targets;
}

namespace {

// Actions whose successor assignment is feasible under the current traffic.
std::vector<int> feasible_actions(const Environment& env) {
  std::vector<int> allowed;
  const double lambda = env.state().lambda_ru_mbps;
  for (int a = 0; a < kActionCount; ++a) {
    Assignment next = apply_action(env.assignment(), action_from_index(a));
    if (check_feasibility(next, lambda, env.scenario()).feasible()) {
      allowed.push_back(a);
    }
  }
  return allowed;
}

int act_masked(const QNetwork& net, const Eigen::VectorXd& features, double epsilon,
               Rng& rng, const std::vector<int>& allowed) {
  if (allowed.empty()) return act(net, features, epsilon, rng);
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    return allowed[static_cast<size_t>(rng.uniform_int(static_cast<int>(allowed.size())))];
  }
  Eigen::VectorXd q = net.forward(features);
  int best = allowed.front();
  for (int a : allowed) {
    if (q(a) > q(best)) best = a;
  }
  return best;
}

double worst_feasible_power(const SolveResult& solved) {
  double worst = 0.0;
  bool any = false;
  for (const CandidateEval& c : solved.ranked) {
    if (c.report.feasible()) {
      worst = std::max(worst, c.power_w);
      any = true;
    }
  }
  return any ? worst : 0.0;
}

}  // namespace

TrainResult train(Environment& env, const TrainConfig& cfg) {
  if (cfg.minibatch_size <= 0 ||
      static_cast<size_t>(cfg.minibatch_size) > cfg.replay_capacity) {
    throw std::invalid_argument("minibatch size must fit the replay capacity");
  }
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in [0, 1)");
  }

  Rng init_rng(Rng::mix(cfg.seed, 0x01));
  Rng policy_rng(Rng::mix(cfg.seed, 0x02));
  Rng sample_rng(Rng::mix(cfg.seed, 0x03));

  TrainResult result{QNetwork::random_init(cfg.shape, init_rng), {}, {}, 0};
  QNetwork& net = result.net;
  QNetwork target = net;
  RmsProp optimizer(net, cfg.rmsprop);
  ReplayBuffer buffer(cfg.replay_capacity);
  const int steps_per_episode = env.steps_per_episode();

  long global_step = 0;
  for (int episode = 0; episode < cfg.episodes; ++episode) {
    env.reset(Rng::mix(cfg.seed, 0x1000 + static_cast<std::uint64_t>(episode)));

    EpisodeMetrics m;
    m.episode = episode;
    int violations = 0;
    int matches = 0;
    int oracle_feasible_steps = 0;
    double power_sum = 0.0;

    for (int s = 0; s < steps_per_episode; ++s) {
      const double epsilon = cfg.epsilon.value(global_step);
      const Eigen::VectorXd features = build_feature_vector(env.state());
      const int action = cfg.mask_infeasible
                             ? act_masked(net, features, epsilon, policy_rng,
                                          feasible_actions(env))
                             : act(net, features, epsilon, policy_rng);

      Environment::StepResult step = env.step(action);
      const Transition& t = step.transition;
      buffer.push(t);

      m.cumulative_reward += t.reward;
      power_sum += t.power_w;
      if (!t.report.feasible()) ++violations;

      SolveResult solved = solve_optimal(t.lambda_mbps, env.scenario());
      if (solved.feasible()) {
        ++oracle_feasible_steps;
        if (*solved.best == t.assignment) ++matches;
      }
      const double worst = worst_feasible_power(solved);
      result.steps.push_back({episode, t.step, t.power_w,
                              worst > 0.0 ? t.power_w / worst : 0.0,
                              t.report.feasible()});

      if (buffer.size() >= static_cast<size_t>(cfg.minibatch_size)) {
        std::vector<const Transition*> batch =
            buffer.sample(static_cast<size_t>(cfg.minibatch_size), sample_rng);
        Eigen::VectorXd targets =
            td_targets(batch, cfg.use_target_network ? target : net, cfg.gamma);

        Eigen::MatrixXd states(cfg.shape.input_dim, cfg.minibatch_size);
        std::vector<int> actions(batch.size());
        for (size_t k = 0; k < batch.size(); ++k) {
          states.col(static_cast<Eigen::Index>(k)) = batch[k]->state;
          actions[k] = batch[k]->action;
        }
        QNetwork::ForwardCache cache;
        net.forward(states, cache);
        optimizer.update(net, net.backward(cache, actions, targets));
        ++result.total_updates;
        if (cfg.use_target_network && result.total_updates % cfg.target_sync_every == 0) {
          target = net;
        }
      }
      ++global_step;
    }

    m.mean_power_w = power_sum / steps_per_episode;
    m.violation_rate = static_cast<double>(violations) / steps_per_episode;
    m.oracle_match_rate = oracle_feasible_steps > 0
                              ? static_cast<double>(matches) / oracle_feasible_steps
                              : 0.0;
    result.episodes.push_back(m);
  }
  return result;
}

std::vector<EvalStep> run_greedy_day(Environment& env, const QNetwork& net,
                                     std::uint64_t seed) {
  env.reset(seed);
  std::vector<EvalStep> trace;
  trace.reserve(static_cast<size_t>(env.steps_per_episode()));
  while (!env.done()) {
    const int action = greedy_action(net.forward(build_feature_vector(env.state())));
    Environment::StepResult step = env.step(action);
    const Transition& t = step.transition;

    EvalStep e;
    e.step = t.step;
    e.minute = env.minute_at(t.step);
    e.lambda_mbps = t.lambda_mbps;
    e.assignment = t.assignment;
    e.power_w = t.power_w;
    e.latency_ms = t.report.latency_ms;
    e.tra_mbps = t.report.traffic_mbps;
    e.feasible = t.report.feasible();
    e.reward = t.reward;

    SolveResult solved = solve_optimal(t.lambda_mbps, env.scenario());
    if (solved.feasible()) {
      e.oracle_assignment = solved.best;
      e.oracle_power_w = solved.best_power_w;
      e.match = *solved.best == t.assignment;
    }
    trace.push_back(std::move(e));
  }
  return trace;
}

}  // namespace ntnsplit
