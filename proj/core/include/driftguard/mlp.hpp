#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "driftguard/common.hpp"
#include "driftguard/rng.hpp"

namespace driftguard {

struct LinearLayer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;
};

// Parameter-shaped gradient accumulator for one Mlp.
struct MlpGrads {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;

  void set_zero();
  void add_scaled(const MlpGrads& other, double scale);  // this += scale*other
  std::size_t param_count() const;
};

// Fully connected stack: ReLU on hidden layers, linear output layer.
class Mlp {
 public:
  Mlp() = default;

  // dims = input..output. Weights U(-1/sqrt(fan_in), +1/sqrt(fan_in)),
  // biases zero.
  static Mlp init(const std::vector<int>& dims, Rng& rng);

  int input_dim() const;
  int output_dim() const;
  std::size_t layer_count() const { return layers_.size(); }
  const std::vector<LinearLayer>& layers() const { return layers_; }
  std::vector<LinearLayer>& layers() { return layers_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  struct Trace {
    std::vector<Eigen::VectorXd> act;  // act[0] = input, act[i] = layer i-1 output
    std::vector<Eigen::VectorXd> pre;  // pre[i]  = layer i pre-activation
  };
  Eigen::VectorXd forward(const Eigen::VectorXd& x, Trace& trace) const;

  // Backpropagates dL/d(output) through the traced pass. Accumulates
  // parameter gradients into *grads when non-null; returns dL/d(input).
  Eigen::VectorXd backward(const Trace& trace, const Eigen::VectorXd& dout,
                           MlpGrads* grads) const;

  MlpGrads zero_grads() const;

 private:
  std::vector<LinearLayer> layers_;
};

// Adam moment accumulators matching one Mlp's parameter tensors.
struct AdamState {
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;
  long step = 0;

  static AdamState zeros_like(const Mlp& net);
};

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

void adam_step(Mlp& net, AdamState& state, const MlpGrads& grads,
               const AdamConfig& config);

}  // namespace driftguard
