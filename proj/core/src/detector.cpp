#include "driftguard/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace driftguard {

bool DetectorState::calibrated() const {
  if (prototypes.empty()) return false;
  for (const auto& [id, proto] : prototypes) {
    (void)id;
    if (proto.theta < 0.0) return false;
  }
  return true;
}

std::map<int, ClassPrototype> fit_prototypes(
    std::span<const Eigen::VectorXd> embeddings, std::span<const int> labels) {
  if (embeddings.size() != labels.size()) {
    raise(ErrorCode::kLengthMismatch, "fit_prototypes");
  }
  if (embeddings.empty()) {
    raise(ErrorCode::kEmptyClass, "fit_prototypes: no samples");
  }
  std::map<int, ClassPrototype> protos;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    auto& proto = protos[labels[i]];
    if (proto.count == 0) {
      proto.class_id = labels[i];
      proto.mean = Eigen::VectorXd::Zero(embeddings[i].size());
    }
    proto.mean += embeddings[i];
    ++proto.count;
  }
  for (auto& [id, proto] : protos) {
    (void)id;
    proto.mean /= static_cast<double>(proto.count);
    proto.var = Eigen::VectorXd::Zero(proto.mean.size());
  }
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    auto& proto = protos[labels[i]];
    proto.var += (embeddings[i] - proto.mean).cwiseAbs2();
  }
  for (auto& [id, proto] : protos) {
    (void)id;
    proto.var /= static_cast<double>(proto.count);
    proto.var = proto.var.cwiseMax(kVarFloor);
  }
  return protos;
}

double euclidean_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    raise(ErrorCode::kDimensionMismatch, "euclidean_distance");
  }
  return (a - b).norm();
}

double jeffreys_divergence(const Eigen::VectorXd& mean_p,
                           const Eigen::VectorXd& var_p,
                           const Eigen::VectorXd& mean_q,
                           const Eigen::VectorXd& var_q) {
  const Eigen::Index dim = mean_p.size();
  if (var_p.size() != dim || mean_q.size() != dim || var_q.size() != dim) {
    raise(ErrorCode::kDimensionMismatch, "jeffreys_divergence");
  }
  double total = 0.0;
  for (Eigen::Index d = 0; d < dim; ++d) {
    const double sp = var_p[d];
    const double sq = var_q[d];
    if (sp <= 0.0 || sq <= 0.0) {
      raise(ErrorCode::kNonPositiveVariance, "jeffreys_divergence");
    }
    const double delta = mean_p[d] - mean_q[d];
    const double d2 = delta * delta;
    total += (sp + d2) / (2.0 * sq) + (sq + d2) / (2.0 * sp) - 1.0;
  }
  return total;
}

std::optional<Eigen::VectorXd> local_covariance(
    const Eigen::VectorXd& h, std::span<const Eigen::VectorXd> window,
    int k_local) {
  if (window.size() < 2) {
    return std::nullopt;
  }
  if (k_local < 1) {
    raise(ErrorCode::kConfigError, "k_local must be >= 1");
  }
  std::vector<std::size_t> idx(window.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> dist(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    dist[i] = (window[i] - h).squaredNorm();
  }
  const std::size_t k =
      std::min(window.size(), static_cast<std::size_t>(k_local));
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return dist[a] < dist[b];
  });

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(h.size());
  for (std::size_t i = 0; i < k; ++i) {
    mean += window[idx[i]];
  }
  mean /= static_cast<double>(k);
  Eigen::VectorXd var = Eigen::VectorXd::Zero(h.size());
  for (std::size_t i = 0; i < k; ++i) {
    var += (window[idx[i]] - mean).cwiseAbs2();
  }
  var /= static_cast<double>(k);
  return var.cwiseMax(kVarFloor);
}

DistanceParts combined_distance(const Eigen::VectorXd& h,
                                const Eigen::VectorXd& local_var,
                                const ClassPrototype& proto,
                                const DetectorConfig& config) {
  DistanceParts parts;
  parts.d_e = euclidean_distance(h, proto.mean);
  if (config.mode == DistanceMode::kEuclideanOnly) {
    parts.d_r = 0.0;
    parts.d = parts.d_e;
    return parts;
  }
  parts.d_r = jeffreys_divergence(h, local_var, proto.mean, proto.var);
  parts.d = parts.d_r + config.lambda1 * parts.d_e;
  return parts;
}

DriftVerdict classify(const Eigen::VectorXd& h,
                      std::span<const Eigen::VectorXd> window_embeddings,
                      const DetectorState& state) {
  if (state.prototypes.empty()) {
    raise(ErrorCode::kNoPrototypes, "classify");
  }
  const auto local = local_covariance(h, window_embeddings, state.config.k_local);

  DriftVerdict best;
  bool first = true;
  // std::map iterates in ascending class id, so strict < implements the
  // smallest-id tie rule.
  for (const auto& [id, proto] : state.prototypes) {
    (void)id;
    const Eigen::VectorXd& lv = local ? *local : proto.var;
    const DistanceParts parts = combined_distance(h, lv, proto, state.config);
    if (first || parts.d < best.distance) {
      best.predicted_class = proto.class_id;
      best.distance = parts.d;
      best.d_r = parts.d_r;
      best.d_e = parts.d_e;
      first = false;
    }
  }
  return best;
}

void calibrate_thresholds(DetectorState& state,
                          std::span<const Eigen::VectorXd> embeddings,
                          std::span<const int> labels) {
  if (embeddings.size() != labels.size()) {
    raise(ErrorCode::kLengthMismatch, "calibrate_thresholds");
  }
  if (state.prototypes.empty()) {
    raise(ErrorCode::kNoPrototypes, "calibrate_thresholds");
  }
  std::map<int, std::vector<Eigen::VectorXd>> by_class;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    by_class[labels[i]].push_back(embeddings[i]);
  }
  for (auto& [id, proto] : state.prototypes) {
    auto it = by_class.find(id);
    if (it == by_class.end() || it->second.empty()) {
      raise(ErrorCode::kEmptyClass,
            "calibrate_thresholds: class " + std::to_string(id));
    }
    const auto& members = it->second;
    std::vector<double> distances;
    distances.reserve(members.size());
    for (const auto& h : members) {
      const auto local = local_covariance(h, members, state.config.k_local);
      const Eigen::VectorXd& lv = local ? *local : proto.var;
      distances.push_back(combined_distance(h, lv, proto, state.config).d);
    }
    const double mean =
        std::accumulate(distances.begin(), distances.end(), 0.0) /
        static_cast<double>(distances.size());
    double var = 0.0;
    for (double d : distances) {
      var += (d - mean) * (d - mean);
    }
    var /= static_cast<double>(distances.size());
    proto.theta = mean + state.config.drift_z * std::sqrt(var);
  }
}

std::vector<DriftVerdict> detect_embeddings(
    std::span<const Eigen::VectorXd> window_embeddings,
    const DetectorState& state, int window_index) {
  if (!state.calibrated()) {
    raise(ErrorCode::kNoPrototypes, "detect: detector not calibrated");
  }
  std::vector<DriftVerdict> verdicts;
  verdicts.reserve(window_embeddings.size());
  for (std::size_t i = 0; i < window_embeddings.size(); ++i) {
    DriftVerdict v = classify(window_embeddings[i], window_embeddings, state);
    const double theta = state.prototypes.at(v.predicted_class).theta;
    v.drifted = v.distance > theta;
    v.window = window_index;
    v.sample_index = static_cast<int>(i);
    verdicts.push_back(v);
  }
  return verdicts;
}

}  // namespace driftguard
