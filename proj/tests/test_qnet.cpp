#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "ntnsplit/qnet.hpp"

using namespace ntnsplit;

namespace {

// Scalar-loop reference forward pass, independent of the Eigen code path.
std::vector<double> reference_forward(const QNetwork& net, const std::vector<double>& x) {
  const auto& w = net.weights();
  const auto& b = net.biases();
  auto affine_relu = [&](int l, const std::vector<double>& in, bool relu) {
    std::vector<double> out(static_cast<size_t>(w[static_cast<size_t>(l)].rows()));
    for (size_t i = 0; i < out.size(); ++i) {
      double acc = b[static_cast<size_t>(l)](static_cast<Eigen::Index>(i));
      for (size_t j = 0; j < in.size(); ++j) {
        acc += w[static_cast<size_t>(l)](static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j)) * in[j];
      }
      out[i] = relu && acc < 0.0 ? 0.0 : acc;
    }
    return out;
  };
  auto add = [](std::vector<double> lhs, const std::vector<double>& rhs) {
    for (size_t i = 0; i < lhs.size(); ++i) lhs[i] += rhs[i];
    return lhs;
  };
  std::vector<double> a1 = affine_relu(0, x, true);
  std::vector<double> a2 = affine_relu(1, a1, true);
  std::vector<double> r1 = add(a2, affine_relu(3, affine_relu(2, a2, true), true));
  std::vector<double> r2 = add(r1, affine_relu(5, affine_relu(4, r1, true), true));
  return affine_relu(6, r2, false);
}

QNetwork random_net(const QNetworkShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  return QNetwork::random_init(shape, rng);
}

struct FdResult {
  double max_rel_err = 0.0;
  int skipped = 0;
  int checked = 0;
};

bool same_activation_pattern(const QNetwork::ForwardCache& a,
                             const QNetwork::ForwardCache& b) {
  for (size_t l = 0; l < a.pre.size(); ++l) {
    if (((a.pre[l].array() > 0.0) != (b.pre[l].array() > 0.0)).any()) return false;
  }
  return true;
}

// Central finite differences of the TD loss against the analytic gradients.
// Coordinates whose perturbation flips a ReLU gate are skipped: the loss is
// not differentiable across the kink, so the comparison is meaningless there.
FdResult finite_difference_check(const QNetwork& net, const Eigen::MatrixXd& states,
                                 const std::vector<int>& actions,
                                 const Eigen::VectorXd& targets, double h,
                                 int max_coords_per_tensor) {
  QNetwork::ForwardCache cache;
  net.forward(states, cache);
  const QNetwork::Gradients grads = net.backward(cache, actions, targets);

  QNetwork probe = net;
  FdResult result;
  auto check_coord = [&](double* value, double analytic) {
    const double saved = *value;
    QNetwork::ForwardCache cp, cm;
    *value = saved + h;
    const double lp = QNetwork::td_loss(probe.forward(states, cp), actions, targets);
    *value = saved - h;
    const double lm = QNetwork::td_loss(probe.forward(states, cm), actions, targets);
    *value = saved;
    if (!same_activation_pattern(cp, cm)) {
      ++result.skipped;
      return;
    }
    const double fd = (lp - lm) / (2.0 * h);
    const double denom = std::max(std::abs(fd), std::abs(analytic));
    if (denom < 1e-10) {
      ++result.checked;
      return;
    }
    result.max_rel_err = std::max(result.max_rel_err, std::abs(fd - analytic) / denom);
    ++result.checked;
  };

  Rng pick(424242);
  for (int l = 0; l < QNetwork::kWeightLayers; ++l) {
    const size_t li = static_cast<size_t>(l);
    Eigen::MatrixXd& w = probe.weights()[li];
    const Eigen::Index n = w.size();
    if (n <= max_coords_per_tensor) {
      for (Eigen::Index k = 0; k < n; ++k) {
        check_coord(w.data() + k, grads.w[li].data()[k]);
      }
    } else {
      for (int c = 0; c < max_coords_per_tensor; ++c) {
        const Eigen::Index k = pick.uniform_int(static_cast<int>(n));
        check_coord(w.data() + k, grads.w[li].data()[k]);
      }
    }
    Eigen::VectorXd& bias = probe.biases()[li];
    for (Eigen::Index k = 0; k < bias.size(); ++k) {
      check_coord(bias.data() + k, grads.b[li].data()[k]);
    }
  }
  return result;
}

}  // namespace

TEST_CASE("all-zero network maps everything to zero") {
  QNetwork net;  // default shape, zero weights
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(11, -1.0, 1.0);
  CHECK(net.forward(x).isZero(0.0));
}

TEST_CASE("zeroed residual blocks pass their input through") {
  QNetwork net = random_net({6, 10, 4}, 31);
  for (int l : {2, 3, 4, 5}) {
    net.weights()[static_cast<size_t>(l)].setZero();
    net.biases()[static_cast<size_t>(l)].setZero();
  }
  // With dead blocks the network reduces to out(relu(W1 relu(W0 x + b0) + b1)).
  Eigen::VectorXd x = Eigen::VectorXd::Random(6);
  Eigen::VectorXd a1 = (net.weights()[0] * x + net.biases()[0]).cwiseMax(0.0);
  Eigen::VectorXd a2 = (net.weights()[1] * a1 + net.biases()[1]).cwiseMax(0.0);
  Eigen::VectorXd expect = net.weights()[6] * a2 + net.biases()[6];
  CHECK((net.forward(x) - expect).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("forward pass matches the scalar reference") {
  QNetwork net = random_net({2, 2, 1}, 7);
  for (int trial = 0; trial < 10; ++trial) {
    Rng rng(100 + static_cast<std::uint64_t>(trial));
    std::vector<double> x = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    Eigen::VectorXd input(2);
    input << x[0], x[1];
    const Eigen::VectorXd q = net.forward(input);
    const std::vector<double> ref = reference_forward(net, x);
    REQUIRE(ref.size() == 1);
    CHECK(q(0) == doctest::Approx(ref[0]).epsilon(1e-12));
  }

  QNetwork wide = random_net({5, 9, 4}, 8);
  Rng rng(55);
  std::vector<double> x(5);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  Eigen::VectorXd xe(5);
  for (int i = 0; i < 5; ++i) xe(i) = x[static_cast<size_t>(i)];
  const Eigen::VectorXd q = wide.forward(xe);
  const std::vector<double> ref = reference_forward(wide, x);
  for (int i = 0; i < 4; ++i) {
    CHECK(q(i) == doctest::Approx(ref[static_cast<size_t>(i)]).epsilon(1e-12));
  }

  // Purity: identical calls agree exactly.
  CHECK((wide.forward(xe) - q).lpNorm<Eigen::Infinity>() == 0.0);

  Eigen::VectorXd wrong_size(4);
  wrong_size.setZero();
  CHECK_THROWS_AS(wide.forward(wrong_size), std::invalid_argument);
}

TEST_CASE("backward gradients match central finite differences everywhere") {
  const QNetworkShape shape{4, 8, 3};
  QNetwork net = random_net(shape, 2025);
  Rng rng(17);
  const int batch = 5;
  Eigen::MatrixXd states(shape.input_dim, batch);
  std::vector<int> actions(batch);
  Eigen::VectorXd targets(batch);
  for (int k = 0; k < batch; ++k) {
    for (int i = 0; i < shape.input_dim; ++i) states(i, k) = rng.uniform(-1.0, 1.0);
    actions[static_cast<size_t>(k)] = rng.uniform_int(shape.output_dim);
    targets(k) = rng.uniform(-2.0, 2.0);
  }

  // Every coordinate of every tensor.
  FdResult fd = finite_difference_check(net, states, actions, targets, 1e-5, 1 << 20);
  CHECK(fd.max_rel_err < 1e-4);
  CHECK(fd.skipped <= 2);
  CHECK(fd.checked > 400);
}

TEST_CASE("perfect fit gives zero gradients; residual scaling is linear") {
  QNetwork net = random_net({3, 6, 2}, 99);
  Rng rng(5);
  const int batch = 4;
  Eigen::MatrixXd states(3, batch);
  std::vector<int> actions(batch);
  for (int k = 0; k < batch; ++k) {
    for (int i = 0; i < 3; ++i) states(i, k) = rng.uniform(-1.0, 1.0);
    actions[static_cast<size_t>(k)] = rng.uniform_int(2);
  }
  QNetwork::ForwardCache cache;
  Eigen::MatrixXd q = net.forward(states, cache);

  // Targets equal to the predictions: a stationary point of the loss.
  Eigen::VectorXd exact(batch);
  for (int k = 0; k < batch; ++k) exact(k) = q(actions[static_cast<size_t>(k)], k);
  QNetwork::Gradients zero = net.backward(cache, actions, exact);
  for (int l = 0; l < QNetwork::kWeightLayers; ++l) {
    CHECK(zero.w[static_cast<size_t>(l)].isZero(0.0));
    CHECK(zero.b[static_cast<size_t>(l)].isZero(0.0));
  }
  CHECK(QNetwork::td_loss(q, actions, exact) == 0.0);

  // Doubling every residual doubles every gradient entry (fixed activations).
  Eigen::VectorXd offset = Eigen::VectorXd::Constant(batch, 0.5);
  QNetwork::Gradients g1 = net.backward(cache, actions, exact - offset);
  QNetwork::Gradients g2 = net.backward(cache, actions, exact - 2.0 * offset);
  for (int l = 0; l < QNetwork::kWeightLayers; ++l) {
    const size_t li = static_cast<size_t>(l);
    CHECK((g2.w[li] - 2.0 * g1.w[li]).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((g2.b[li] - 2.0 * g1.b[li]).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("weights file round-trips exactly and rejects damage") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "ntnsplit_qnet_test.bin";
  QNetwork net = random_net({11, 12, 6}, 4096);
  net.save(path.string());

  QNetwork loaded = QNetwork::load(path.string());
  CHECK(loaded.equal_weights(net));
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(11, 0.0, 1.0);
  CHECK((loaded.forward(x) - net.forward(x)).lpNorm<Eigen::Infinity>() == 0.0);

  SUBCASE("truncated file") {
    const auto size = fs::file_size(path);
    fs::resize_file(path, size / 2);
    CHECK_THROWS_AS(QNetwork::load(path.string()), WeightsError);
  }
  SUBCASE("bad magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
    f.close();
    CHECK_THROWS_AS(QNetwork::load(path.string()), WeightsError);
  }
  SUBCASE("version mismatch") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(8);  // version field follows the 8-byte magic
    const std::uint32_t bad = 99;
    f.write(reinterpret_cast<const char*>(&bad), sizeof bad);
    f.close();
    CHECK_THROWS_AS(QNetwork::load(path.string()), WeightsError);
  }
  SUBCASE("layer dimensions disagree with the header") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(8 + 4 + 12);  // first layer's row count
    const std::int32_t bad = 7;
    f.write(reinterpret_cast<const char*>(&bad), sizeof bad);
    f.close();
    CHECK_THROWS_AS(QNetwork::load(path.string()), WeightsError);
  }
  SUBCASE("trailing bytes") {
    std::ofstream f(path, std::ios::app | std::ios::binary);
    f.put('\0');
    f.close();
    CHECK_THROWS_AS(QNetwork::load(path.string()), WeightsError);
  }
  fs::remove(path);
}
