#include "driftguard/mlp.hpp"

#include <cmath>

namespace driftguard {

void MlpGrads::set_zero() {
  for (auto& g : w) g.setZero();
  for (auto& g : b) g.setZero();
}

void MlpGrads::add_scaled(const MlpGrads& other, double scale) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] += scale * other.w[i];
    b[i] += scale * other.b[i];
  }
}

std::size_t MlpGrads::param_count() const {
  std::size_t n = 0;
  for (const auto& g : w) n += static_cast<std::size_t>(g.size());
  for (const auto& g : b) n += static_cast<std::size_t>(g.size());
  return n;
}

Mlp Mlp::init(const std::vector<int>& dims, Rng& rng) {
  if (dims.size() < 2) {
    raise(ErrorCode::kInvalidArchitecture,
          "need at least input and output dims");
  }
  for (int d : dims) {
    if (d < 1) {
      raise(ErrorCode::kInvalidArchitecture, "non-positive layer dim");
    }
  }
  Mlp net;
  net.layers_.resize(dims.size() - 1);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    auto& layer = net.layers_[l];
    layer.w.resize(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        layer.w(r, c) = rng.uniform(-bound, bound);
      }
    }
    layer.b = Eigen::VectorXd::Zero(fan_out);
  }
  return net;
}

int Mlp::input_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().w.cols());
}

int Mlp::output_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().w.rows());
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim()) {
    raise(ErrorCode::kDimensionMismatch,
          "forward: input dim " + std::to_string(x.size()) + ", expected " +
              std::to_string(input_dim()));
  }
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    a = layers_[l].w * a + layers_[l].b;
    if (l + 1 < layers_.size()) {
      a = a.cwiseMax(0.0);
    }
  }
  return a;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x, Trace& trace) const {
  if (x.size() != input_dim()) {
    raise(ErrorCode::kDimensionMismatch, "forward: input dim mismatch");
  }
  trace.act.assign(1, x);
  trace.pre.clear();
  trace.act.reserve(layers_.size() + 1);
  trace.pre.reserve(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::VectorXd z = layers_[l].w * trace.act.back() + layers_[l].b;
    trace.pre.push_back(z);
    if (l + 1 < layers_.size()) {
      trace.act.push_back(z.cwiseMax(0.0));
    } else {
      trace.act.push_back(std::move(z));
    }
  }
  return trace.act.back();
}

Eigen::VectorXd Mlp::backward(const Trace& trace, const Eigen::VectorXd& dout,
                              MlpGrads* grads) const {
  if (trace.pre.size() != layers_.size() ||
      dout.size() != output_dim()) {
    raise(ErrorCode::kDimensionMismatch, "backward: trace/gradient mismatch");
  }
  Eigen::VectorXd delta = dout;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    if (l + 1 < layers_.size()) {
      // ReLU mask of the traced pre-activation.
      delta = delta.cwiseProduct(
          (trace.pre[l].array() > 0.0).cast<double>().matrix());
    }
    if (grads != nullptr) {
      grads->w[l].noalias() += delta * trace.act[l].transpose();
      grads->b[l] += delta;
    }
    delta = layers_[l].w.transpose() * delta;
  }
  return delta;
}

MlpGrads Mlp::zero_grads() const {
  MlpGrads g;
  g.w.reserve(layers_.size());
  g.b.reserve(layers_.size());
  for (const auto& layer : layers_) {
    g.w.emplace_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    g.b.emplace_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  return g;
}

AdamState AdamState::zeros_like(const Mlp& net) {
  AdamState s;
  for (const auto& layer : net.layers()) {
    s.m_w.emplace_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    s.v_w.emplace_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    s.m_b.emplace_back(Eigen::VectorXd::Zero(layer.b.size()));
    s.v_b.emplace_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  return s;
}

namespace {

template <class Param, class Moment>
void adam_update(Param& p, Moment& m, Moment& v, const Param& g,
                 const AdamConfig& c, double bias1, double bias2) {
  m = c.beta1 * m + (1.0 - c.beta1) * g;
  v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
  const auto m_hat = m / bias1;
  const auto v_hat = v / bias2;
  p.array() -= c.lr * m_hat.array() / (v_hat.array().sqrt() + c.epsilon);
}

}  // namespace

void adam_step(Mlp& net, AdamState& state, const MlpGrads& grads,
               const AdamConfig& config) {
  if (state.m_w.size() != net.layer_count() ||
      grads.w.size() != net.layer_count()) {
    raise(ErrorCode::kDimensionMismatch, "adam_step: shape mismatch");
  }
  ++state.step;
  const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    auto& layer = net.layers()[l];
    adam_update(layer.w, state.m_w[l], state.v_w[l], grads.w[l], config, bias1,
                bias2);
    adam_update(layer.b, state.m_b[l], state.v_b[l], grads.b[l], config, bias1,
                bias2);
  }
}

}  // namespace driftguard
