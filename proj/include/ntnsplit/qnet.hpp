#pragma once

#include <Eigen/Core>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "ntnsplit/rng.hpp"

namespace ntnsplit {

class WeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QNetworkShape {
  int input_dim = 11;
  int hidden_width = 128;
  int output_dim = 6;
};

// ReLU multilayer perceptron with residual shortcuts:
//
//   input -> FC1 -> FC2 -> [FC3 -> FC4 (+ skip)] -> [FC5 -> FC6 (+ skip)] -> linear out
//
// Six hidden layers of equal width; the bracketed pairs are residual blocks
// whose input is added element-wise to the output of their second layer.
// The output layer is linear and emits one Q-value per action.
class QNetwork {
 public:
  static constexpr int kWeightLayers = 7;  // 6 hidden + output
  using Matrices = std::array<Eigen::MatrixXd, kWeightLayers>;
  using Vectors = std::array<Eigen::VectorXd, kWeightLayers>;

  QNetwork() : QNetwork(QNetworkShape{}) {}
  explicit QNetwork(const QNetworkShape& shape);  // all weights zero

  /// Fan-in scaled normal initialization (std = sqrt(2 / fan_in)), zero biases.
  static QNetwork random_init(const QNetworkShape& shape, Rng& rng);

  const QNetworkShape& shape() const { return shape_; }
  Matrices& weights() { return w_; }
  const Matrices& weights() const { return w_; }
  Vectors& biases() { return b_; }
  const Vectors& biases() const { return b_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& features) const;

  /// Batched forward pass; each column of `states` is one feature vector,
  /// each column of the result the matching Q-values.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& states) const;

  // Intermediate activations of one batched pass, kept for backpropagation.
  struct ForwardCache {
    std::array<Eigen::MatrixXd, kWeightLayers> layer_in;  // input to each weight layer
    std::array<Eigen::MatrixXd, kWeightLayers - 1> pre;   // hidden pre-activations
    Eigen::MatrixXd q;                                    // output layer values
  };

  Eigen::MatrixXd forward(const Eigen::MatrixXd& states, ForwardCache& cache) const;

  struct Gradients {
    Matrices w;
    Vectors b;
  };

  /// Mean squared TD error over the batch; per sample only the Q-value of
  /// the taken action enters the loss.
  static double td_loss(const Eigen::MatrixXd& q, const std::vector<int>& actions,
                        const Eigen::VectorXd& targets);

  /// Gradient of td_loss with respect to every weight and bias.
  Gradients backward(const ForwardCache& cache, const std::vector<int>& actions,
                     const Eigen::VectorXd& targets) const;

  Gradients zero_gradients() const;

  // Versioned binary weights file; load() either returns a complete network
  // or throws WeightsError.
  void save(const std::string& path) const;
  static QNetwork load(const std::string& path);

  bool equal_weights(const QNetwork& other) const;

 private:
  void check_input(Eigen::Index rows) const;

  QNetworkShape shape_;
  Matrices w_;
  Vectors b_;
};

}  // namespace ntnsplit
