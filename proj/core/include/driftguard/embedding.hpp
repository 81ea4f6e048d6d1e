#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "driftguard/mlp.hpp"
#include "driftguard/schema.hpp"

namespace driftguard {

// Encoder layer sizes from input to embedding; the decoder mirrors them.
struct Architecture {
  std::vector<int> layer_dims;

  void validate() const;
  int input_dim() const { return layer_dims.front(); }
  int embedding_dim() const { return layer_dims.back(); }
  std::vector<int> decoder_dims() const;
};

struct EmbeddingModel {
  Mlp encoder;
  Mlp decoder;
  Architecture arch;
  AdamState opt_encoder;
  AdamState opt_decoder;
  std::uint64_t rng_seed = 0;

  Eigen::VectorXd encode(const Eigen::VectorXd& x) const;
  Eigen::VectorXd decode(const Eigen::VectorXd& h) const;
};

EmbeddingModel init_model(const Architecture& arch, std::uint64_t seed);

// Per-class unit-norm representation vectors, updated as an exponential
// moving average of batch class means.
struct ClassRepresentations {
  std::map<int, Eigen::VectorXd> v;
  double momentum = 0.9;
};

struct TrainConfig {
  double lr = 1e-4;
  int epochs = 300;
  int batch_size = 256;
  double tau = 0.1;
  double beta_contrastive = 1.0;
  double rep_momentum = 0.9;
  std::uint64_t seed = 0;

  void validate() const;
};

// Mean over the batch of squared L2 reconstruction error, with gradients for
// both encoder and decoder parameters.
struct MseLossResult {
  double loss = 0.0;
  MlpGrads d_encoder;
  MlpGrads d_decoder;
};
MseLossResult mse_loss(const EmbeddingModel& model,
                       const std::vector<Eigen::VectorXd>& batch);

// cosine(h, v) / tau. Throws ZeroVector on a zero-norm argument.
double scaled_cosine(const Eigen::VectorXd& h, const Eigen::VectorXd& v,
                     double tau);

// Temperature-scaled softmax over class representations, summed over the
// batch. Representations are constants: no gradient flows into them.
struct ContrastiveLossResult {
  double loss = 0.0;
  MlpGrads d_encoder;
};
ContrastiveLossResult contrastive_loss(const EmbeddingModel& model,
                                       const std::vector<Eigen::VectorXd>& batch,
                                       const std::vector<int>& labels,
                                       const ClassRepresentations& reps,
                                       double tau);

// v_k <- normalize(momentum * v_k + (1 - momentum) * batch class mean);
// classes absent from reps are initialized to the normalized batch mean.
void update_class_reps(ClassRepresentations& reps,
                       const std::vector<Eigen::VectorXd>& embeddings,
                       const std::vector<int>& labels);

struct EpochLoss {
  double mse = 0.0;
  double contrastive = 0.0;
};

struct TrainResult {
  EmbeddingModel model;
  ClassRepresentations reps;
  std::vector<EpochLoss> history;
};

// Joint training: stratified shuffled batches, L = L_mse + beta * L_con,
// Adam updates, then the EMA representation refresh. Deterministic per seed.
// Training continues from the passed model's parameters and optimizer state.
TrainResult train(EmbeddingModel model, const Dataset& train_set,
                  const TrainConfig& config);

}  // namespace driftguard
