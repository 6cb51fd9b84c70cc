#include "ntnsplit/qnet.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace ntnsplit {

namespace {

// rows x cols of each weight layer for a given shape.
std::array<std::pair<int, int>, QNetwork::kWeightLayers> layer_dims(const QNetworkShape& s) {
  const int h = s.hidden_width;
  return {{{h, s.input_dim}, {h, h}, {h, h}, {h, h}, {h, h}, {h, h}, {s.output_dim, h}}};
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

// Derivative gate: 1 where the pre-activation was positive.
Eigen::ArrayXXd relu_gate(const Eigen::MatrixXd& z) {
  return (z.array() > 0.0).cast<double>();
}

}  // namespace

QNetwork::QNetwork(const QNetworkShape& shape) : shape_(shape) {
  if (shape.input_dim <= 0 || shape.hidden_width <= 0 || shape.output_dim <= 0) {
    throw std::invalid_argument("network dimensions must be positive");
  }
  const auto dims = layer_dims(shape_);
  for (int l = 0; l < kWeightLayers; ++l) {
    w_[static_cast<size_t>(l)] = Eigen::MatrixXd::Zero(dims[static_cast<size_t>(l)].first,
                                                       dims[static_cast<size_t>(l)].second);
    b_[static_cast<size_t>(l)] = Eigen::VectorXd::Zero(dims[static_cast<size_t>(l)].first);
  }
}

QNetwork QNetwork::random_init(const QNetworkShape& shape, Rng& rng) {
  QNetwork net(shape);
  for (int l = 0; l < kWeightLayers; ++l) {
    Eigen::MatrixXd& w = net.w_[static_cast<size_t>(l)];
    const double std_dev = std::sqrt(2.0 / static_cast<double>(w.cols()));
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        w(i, j) = std_dev * rng.normal();
      }
    }
  }
  return net;
}

void QNetwork::check_input(Eigen::Index rows) const {
  if (rows != shape_.input_dim) {
    throw std::invalid_argument("feature dimension mismatch: expected " +
                                std::to_string(shape_.input_dim) + ", got " +
                                std::to_string(rows));
  }
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd& features) const {
  return forward(Eigen::MatrixXd(features)).col(0);
}

Eigen::MatrixXd QNetwork::forward(const Eigen::MatrixXd& states) const {
  ForwardCache cache;
  return forward(states, cache);
}

Eigen::MatrixXd QNetwork::forward(const Eigen::MatrixXd& states, ForwardCache& c) const {
  check_input(states.rows());

  auto affine = [&](int l, const Eigen::MatrixXd& in) -> Eigen::MatrixXd {
    return (w_[static_cast<size_t>(l)] * in).colwise() + b_[static_cast<size_t>(l)];
  };

  c.layer_in[0] = states;
  c.pre[0] = affine(0, c.layer_in[0]);
  c.layer_in[1] = relu(c.pre[0]);
  c.pre[1] = affine(1, c.layer_in[1]);
  c.layer_in[2] = relu(c.pre[1]);  // FC2 output, shortcut source of block 1

  c.pre[2] = affine(2, c.layer_in[2]);
  c.layer_in[3] = relu(c.pre[2]);
  c.pre[3] = affine(3, c.layer_in[3]);
  c.layer_in[4] = c.layer_in[2] + relu(c.pre[3]);  // block 1 output

  c.pre[4] = affine(4, c.layer_in[4]);
  c.layer_in[5] = relu(c.pre[4]);
  c.pre[5] = affine(5, c.layer_in[5]);
  c.layer_in[6] = c.layer_in[4] + relu(c.pre[5]);  // block 2 output

  c.q = affine(6, c.layer_in[6]);
  return c.q;
}

double QNetwork::td_loss(const Eigen::MatrixXd& q, const std::vector<int>& actions,
                         const Eigen::VectorXd& targets) {
  const Eigen::Index batch = q.cols();
  if (static_cast<Eigen::Index>(actions.size()) != batch || targets.size() != batch) {
    throw std::invalid_argument("batch size mismatch in td_loss");
  }
  double loss = 0.0;
  for (Eigen::Index k = 0; k < batch; ++k) {
    const double r = q(actions[static_cast<size_t>(k)], k) - targets(k);
    loss += r * r;
  }
  return loss / static_cast<double>(batch);
}

QNetwork::Gradients QNetwork::zero_gradients() const {
  Gradients g;
  for (int l = 0; l < kWeightLayers; ++l) {
    g.w[static_cast<size_t>(l)] = Eigen::MatrixXd::Zero(w_[static_cast<size_t>(l)].rows(),
                                                        w_[static_cast<size_t>(l)].cols());
    g.b[static_cast<size_t>(l)] = Eigen::VectorXd::Zero(b_[static_cast<size_t>(l)].size());
  }
  return g;
}

QNetwork::Gradients QNetwork::backward(const ForwardCache& c,
                                       const std::vector<int>& actions,
                                       const Eigen::VectorXd& targets) const {
  const Eigen::Index batch = c.q.cols();
  if (static_cast<Eigen::Index>(actions.size()) != batch || targets.size() != batch) {
    throw std::invalid_argument("batch size mismatch in backward");
  }

  Gradients g = zero_gradients();

  // d(loss)/d(q): only the taken action's Q-value per sample carries error.
  Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(c.q.rows(), batch);
  for (Eigen::Index k = 0; k < batch; ++k) {
    const int a = actions[static_cast<size_t>(k)];
    dq(a, k) = 2.0 * (c.q(a, k) - targets(k)) / static_cast<double>(batch);
  }

  auto through = [&](int l, const Eigen::MatrixXd& delta) -> Eigen::MatrixXd {
    g.w[static_cast<size_t>(l)].noalias() = delta * c.layer_in[static_cast<size_t>(l)].transpose();
    g.b[static_cast<size_t>(l)] = delta.rowwise().sum();
    return w_[static_cast<size_t>(l)].transpose() * delta;
  };

  Eigen::MatrixXd d_r2 = through(6, dq);

  // block 2: out = in + relu(...), so the shortcut adds d_r2 to the block input.
  Eigen::MatrixXd d5 = (d_r2.array() * relu_gate(c.pre[5])).matrix();
  Eigen::MatrixXd d_a4 = through(5, d5);
  Eigen::MatrixXd d4 = (d_a4.array() * relu_gate(c.pre[4])).matrix();
  Eigen::MatrixXd d_r1 = through(4, d4) + d_r2;

  // block 1
  Eigen::MatrixXd d3 = (d_r1.array() * relu_gate(c.pre[3])).matrix();
  Eigen::MatrixXd d_a2 = through(3, d3);
  Eigen::MatrixXd d2 = (d_a2.array() * relu_gate(c.pre[2])).matrix();
  Eigen::MatrixXd d_fc2 = through(2, d2) + d_r1;

  Eigen::MatrixXd d1 = (d_fc2.array() * relu_gate(c.pre[1])).matrix();
  Eigen::MatrixXd d_fc1 = through(1, d1);
  Eigen::MatrixXd d0 = (d_fc1.array() * relu_gate(c.pre[0])).matrix();
  through(0, d0);

  return g;
}

namespace {

constexpr char kMagic[8] = {'N', 'T', 'N', 'Q', 'N', 'E', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
void read_raw(std::istream& in, T& value, const char* what) {
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!in) throw WeightsError(std::string("weights file truncated while reading ") + what);
}

}  // namespace

void QNetwork::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WeightsError("cannot open weights file for writing: " + path);
  out.write(kMagic, sizeof kMagic);
  write_raw(out, kVersion);
  write_raw(out, static_cast<std::int32_t>(shape_.input_dim));
  write_raw(out, static_cast<std::int32_t>(shape_.hidden_width));
  write_raw(out, static_cast<std::int32_t>(shape_.output_dim));
  for (int l = 0; l < kWeightLayers; ++l) {
    const Eigen::MatrixXd& w = w_[static_cast<size_t>(l)];
    const Eigen::VectorXd& b = b_[static_cast<size_t>(l)];
    write_raw(out, static_cast<std::int32_t>(w.rows()));
    write_raw(out, static_cast<std::int32_t>(w.cols()));
    out.write(reinterpret_cast<const char*>(w.data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(w.size())));
    out.write(reinterpret_cast<const char*>(b.data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(b.size())));
  }
  if (!out) throw WeightsError("failed writing weights file: " + path);
}

QNetwork QNetwork::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WeightsError("cannot open weights file: " + path);

  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw WeightsError("not a weights file (bad magic): " + path);
  }
  std::uint32_t version = 0;
  read_raw(in, version, "version");
  if (version != kVersion) {
    throw WeightsError("unsupported weights file version " + std::to_string(version) +
                       " (expected " + std::to_string(kVersion) + ")");
  }
  std::int32_t input_dim = 0, hidden = 0, output_dim = 0;
  read_raw(in, input_dim, "dimensions");
  read_raw(in, hidden, "dimensions");
  read_raw(in, output_dim, "dimensions");
  if (input_dim <= 0 || hidden <= 0 || output_dim <= 0) {
    throw WeightsError("weights file carries non-positive dimensions");
  }

  QNetwork net(QNetworkShape{input_dim, hidden, output_dim});
  const auto dims = layer_dims(net.shape_);
  for (int l = 0; l < kWeightLayers; ++l) {
    std::int32_t rows = 0, cols = 0;
    read_raw(in, rows, "layer header");
    read_raw(in, cols, "layer header");
    if (rows != dims[static_cast<size_t>(l)].first || cols != dims[static_cast<size_t>(l)].second) {
      throw WeightsError("layer " + std::to_string(l) + " dimensions do not match topology");
    }
    Eigen::MatrixXd& w = net.w_[static_cast<size_t>(l)];
    Eigen::VectorXd& b = net.b_[static_cast<size_t>(l)];
    in.read(reinterpret_cast<char*>(w.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(w.size())));
    in.read(reinterpret_cast<char*>(b.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(b.size())));
    if (!in) throw WeightsError("weights file truncated in layer " + std::to_string(l));
  }
  in.peek();
  if (!in.eof()) throw WeightsError("weights file has trailing bytes: " + path);
  return net;
}

bool QNetwork::equal_weights(const QNetwork& other) const {
  if (shape_.input_dim != other.shape_.input_dim ||
      shape_.hidden_width != other.shape_.hidden_width ||
      shape_.output_dim != other.shape_.output_dim) {
    return false;
  }
  for (int l = 0; l < kWeightLayers; ++l) {
    if (w_[static_cast<size_t>(l)] != other.w_[static_cast<size_t>(l)]) return false;
    if (b_[static_cast<size_t>(l)] != other.b_[static_cast<size_t>(l)]) return false;
  }
  return true;
}

}  // namespace ntnsplit
