#include "driftguard/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace driftguard {

void Architecture::validate() const {
  if (layer_dims.size() < 2) {
    raise(ErrorCode::kInvalidArchitecture,
          "architecture needs input and embedding dims, got " +
              std::to_string(layer_dims.size()) + " entries");
  }
  for (int d : layer_dims) {
    if (d < 1) {
      raise(ErrorCode::kInvalidArchitecture, "non-positive layer dim");
    }
  }
}

std::vector<int> Architecture::decoder_dims() const {
  std::vector<int> dims(layer_dims.rbegin(), layer_dims.rend());
  return dims;
}

Eigen::VectorXd EmbeddingModel::encode(const Eigen::VectorXd& x) const {
  return encoder.forward(x);
}

Eigen::VectorXd EmbeddingModel::decode(const Eigen::VectorXd& h) const {
  return decoder.forward(h);
}

EmbeddingModel init_model(const Architecture& arch, std::uint64_t seed) {
  arch.validate();
  EmbeddingModel model;
  model.arch = arch;
  model.rng_seed = seed;
  Rng rng(seed);
  model.encoder = Mlp::init(arch.layer_dims, rng);
  model.decoder = Mlp::init(arch.decoder_dims(), rng);
  model.opt_encoder = AdamState::zeros_like(model.encoder);
  model.opt_decoder = AdamState::zeros_like(model.decoder);
  return model;
}

void TrainConfig::validate() const {
  if (lr <= 0.0) raise(ErrorCode::kConfigError, "lr must be positive");
  if (tau <= 0.0) raise(ErrorCode::kConfigError, "tau must be positive");
  if (batch_size < 2) raise(ErrorCode::kConfigError, "batch_size must be >= 2");
  if (epochs < 0) raise(ErrorCode::kConfigError, "epochs must be >= 0");
  if (beta_contrastive < 0.0) {
    raise(ErrorCode::kConfigError, "beta_contrastive must be >= 0");
  }
  if (rep_momentum < 0.0 || rep_momentum >= 1.0) {
    raise(ErrorCode::kConfigError, "rep_momentum must lie in [0, 1)");
  }
}

MseLossResult mse_loss(const EmbeddingModel& model,
                       const std::vector<Eigen::VectorXd>& batch) {
  if (batch.empty()) {
    raise(ErrorCode::kEmptyBatch, "mse_loss");
  }
  MseLossResult out;
  out.d_encoder = model.encoder.zero_grads();
  out.d_decoder = model.decoder.zero_grads();
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (const auto& x : batch) {
    Mlp::Trace enc_trace, dec_trace;
    const Eigen::VectorXd h = model.encoder.forward(x, enc_trace);
    const Eigen::VectorXd x_hat = model.decoder.forward(h, dec_trace);
    const Eigen::VectorXd residual = x_hat - x;
    out.loss += inv_b * residual.squaredNorm();

    const Eigen::VectorXd d_xhat = 2.0 * inv_b * residual;
    const Eigen::VectorXd d_h =
        model.decoder.backward(dec_trace, d_xhat, &out.d_decoder);
    model.encoder.backward(enc_trace, d_h, &out.d_encoder);
  }
  return out;
}

double scaled_cosine(const Eigen::VectorXd& h, const Eigen::VectorXd& v,
                     double tau) {
  if (tau <= 0.0) {
    raise(ErrorCode::kConfigError, "tau must be positive");
  }
  const double hn = h.norm();
  const double vn = v.norm();
  if (hn == 0.0 || vn == 0.0) {
    raise(ErrorCode::kZeroVector, "scaled_cosine");
  }
  return h.dot(v) / (hn * vn * tau);
}

ContrastiveLossResult contrastive_loss(
    const EmbeddingModel& model, const std::vector<Eigen::VectorXd>& batch,
    const std::vector<int>& labels, const ClassRepresentations& reps,
    double tau) {
  if (batch.empty()) {
    raise(ErrorCode::kEmptyBatch, "contrastive_loss");
  }
  if (batch.size() != labels.size()) {
    raise(ErrorCode::kLengthMismatch, "contrastive_loss: batch vs labels");
  }
  if (tau <= 0.0) {
    raise(ErrorCode::kConfigError, "tau must be positive");
  }
  for (int label : labels) {
    if (!reps.v.count(label)) {
      raise(ErrorCode::kUnknownLabel,
            "no class representation for label " + std::to_string(label));
    }
  }

  // Unit-normalized representations, in class-id order.
  std::vector<int> rep_ids;
  std::vector<Eigen::VectorXd> rep_unit;
  rep_ids.reserve(reps.v.size());
  rep_unit.reserve(reps.v.size());
  for (const auto& [id, v] : reps.v) {
    const double n = v.norm();
    if (n == 0.0) {
      raise(ErrorCode::kZeroVector, "class representation " + std::to_string(id));
    }
    rep_ids.push_back(id);
    rep_unit.push_back(v / n);
  }

  ContrastiveLossResult out;
  out.d_encoder = model.encoder.zero_grads();
  const std::size_t n_reps = rep_ids.size();
  const double inv_tau = 1.0 / tau;

  for (std::size_t i = 0; i < batch.size(); ++i) {
    Mlp::Trace trace;
    const Eigen::VectorXd h = model.encoder.forward(batch[i], trace);
    const double hn = h.norm();
    if (hn == 0.0) {
      raise(ErrorCode::kZeroVector, "zero embedding in contrastive batch");
    }
    const Eigen::VectorXd u = h / hn;

    std::vector<double> s(n_reps);
    std::size_t own = 0;
    double s_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_reps; ++j) {
      s[j] = u.dot(rep_unit[j]) * inv_tau;
      s_max = std::max(s_max, s[j]);
      if (rep_ids[j] == labels[i]) own = j;
    }
    // Log-sum-exp with max subtraction.
    double z = 0.0;
    for (std::size_t j = 0; j < n_reps; ++j) {
      z += std::exp(s[j] - s_max);
    }
    out.loss += -(s[own] - s_max) + std::log(z);

    // dL/ds_j = softmax_j - [j == own]; ds_j/dh = (v_j - (u.v_j) u)/(tau*|h|).
    Eigen::VectorXd d_h = Eigen::VectorXd::Zero(h.size());
    for (std::size_t j = 0; j < n_reps; ++j) {
      const double p = std::exp(s[j] - s_max) / z;
      const double coeff = p - (j == own ? 1.0 : 0.0);
      if (coeff == 0.0) continue;
      const double uv = u.dot(rep_unit[j]);
      d_h += coeff * inv_tau / hn * (rep_unit[j] - uv * u);
    }
    model.encoder.backward(trace, d_h, &out.d_encoder);
  }
  return out;
}

void update_class_reps(ClassRepresentations& reps,
                       const std::vector<Eigen::VectorXd>& embeddings,
                       const std::vector<int>& labels) {
  if (embeddings.size() != labels.size()) {
    raise(ErrorCode::kLengthMismatch, "update_class_reps");
  }
  std::map<int, std::pair<Eigen::VectorXd, long>> sums;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    auto it = sums.find(labels[i]);
    if (it == sums.end()) {
      sums.emplace(labels[i], std::make_pair(embeddings[i], 1L));
    } else {
      it->second.first += embeddings[i];
      ++it->second.second;
    }
  }
  for (const auto& [label, sum_count] : sums) {
    const Eigen::VectorXd mean =
        sum_count.first / static_cast<double>(sum_count.second);
    auto it = reps.v.find(label);
    Eigen::VectorXd next;
    if (it == reps.v.end()) {
      next = mean;
    } else {
      next = reps.momentum * it->second + (1.0 - reps.momentum) * mean;
    }
    const double n = next.norm();
    if (n < 1e-12) {
      // Degenerate mean; keep a deterministic unit direction.
      next = Eigen::VectorXd::Zero(mean.size());
      next[0] = 1.0;
    } else {
      next /= n;
    }
    reps.v[label] = next;
  }
}

namespace {

// Per-epoch stratified batch plan: every class spreads its shuffled samples
// across all batches as evenly as possible, so any batch carries >= 2 classes
// whenever the data does.
std::vector<std::vector<std::size_t>> plan_batches(const Dataset& data,
                                                   int batch_size, Rng& rng) {
  auto by_class = indices_by_class(data);
  const std::size_t n = data.size();
  const std::size_t n_batches =
      (n + static_cast<std::size_t>(batch_size) - 1) /
      static_cast<std::size_t>(batch_size);
  std::vector<std::vector<std::size_t>> batches(n_batches);
  std::size_t class_rank = 0;
  for (auto& [label, idx] : by_class) {
    (void)label;
    rng.shuffle(idx);
    const std::size_t base = idx.size() / n_batches;
    const std::size_t rem = idx.size() % n_batches;
    std::size_t cursor = 0;
    for (std::size_t b = 0; b < n_batches; ++b) {
      // Rotate which batches take the remainder so sizes stay balanced.
      const std::size_t slot = (b + class_rank) % n_batches;
      std::size_t count = base + (slot < rem ? 1 : 0);
      while (count-- > 0 && cursor < idx.size()) {
        batches[b].push_back(idx[cursor++]);
      }
    }
    ++class_rank;
  }
  return batches;
}

}  // namespace

TrainResult train(EmbeddingModel model, const Dataset& train_set,
                  const TrainConfig& config) {
  config.validate();
  if (train_set.empty()) {
    raise(ErrorCode::kEmptyTrainingSet, "train");
  }
  for (const auto& rec : train_set) {
    if (!rec.has_label()) {
      raise(ErrorCode::kUnknownLabel, "train: unlabeled sample");
    }
  }

  TrainResult out;
  out.reps.momentum = config.rep_momentum;

  // Initial representations: normalized class means of the untrained encoder,
  // so the contrastive term is well-defined from the first batch.
  {
    std::vector<Eigen::VectorXd> embeddings;
    std::vector<int> labels;
    embeddings.reserve(train_set.size());
    labels.reserve(train_set.size());
    for (const auto& rec : train_set) {
      embeddings.push_back(model.encode(rec.x));
      labels.push_back(rec.label);
    }
    ClassRepresentations init;
    init.momentum = 0.0;  // plain means for the seed values
    update_class_reps(init, embeddings, labels);
    out.reps.v = std::move(init.v);
  }

  const AdamConfig adam{config.lr, 0.9, 0.999, 1e-8};
  Rng rng(config.seed);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng epoch_rng = rng.fork(static_cast<std::uint64_t>(epoch));
    const auto batches = plan_batches(train_set, config.batch_size, epoch_rng);
    EpochLoss epoch_loss;
    std::size_t n_batches = 0;

    for (const auto& batch_idx : batches) {
      if (batch_idx.empty()) continue;
      std::vector<Eigen::VectorXd> xs;
      std::vector<int> labels;
      xs.reserve(batch_idx.size());
      labels.reserve(batch_idx.size());
      for (std::size_t i : batch_idx) {
        xs.push_back(train_set[i].x);
        labels.push_back(train_set[i].label);
      }

      auto mse = mse_loss(model, xs);
      MlpGrads enc_grads = std::move(mse.d_encoder);
      double con_value = 0.0;
      if (config.beta_contrastive > 0.0) {
        auto con = contrastive_loss(model, xs, labels, out.reps, config.tau);
        con_value = con.loss;
        enc_grads.add_scaled(con.d_encoder, config.beta_contrastive);
      }

      adam_step(model.encoder, model.opt_encoder, enc_grads, adam);
      adam_step(model.decoder, model.opt_decoder, mse.d_decoder, adam);

      // Refresh representations with this batch's post-update embeddings.
      std::vector<Eigen::VectorXd> embeddings;
      embeddings.reserve(xs.size());
      for (const auto& x : xs) {
        embeddings.push_back(model.encode(x));
      }
      update_class_reps(out.reps, embeddings, labels);

      epoch_loss.mse += mse.loss;
      epoch_loss.contrastive += con_value;
      ++n_batches;
    }
    if (n_batches > 0) {
      epoch_loss.mse /= static_cast<double>(n_batches);
      epoch_loss.contrastive /= static_cast<double>(n_batches);
    }
    out.history.push_back(epoch_loss);
  }

  out.model = std::move(model);
  return out;
}

}  // namespace driftguard
