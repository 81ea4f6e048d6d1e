#include "driftguard/system.hpp"

namespace driftguard {

namespace {

std::vector<int> labels_of(const Dataset& records) {
  std::vector<int> labels;
  labels.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.has_label()) {
      raise(ErrorCode::kUnknownLabel, "expected a labeled sample");
    }
    labels.push_back(rec.label);
  }
  return labels;
}

}  // namespace

DriftSystem build_system(const FeatureSchema& schema, const LabelMap& labels,
                         const Dataset& raw_train, const Architecture& arch,
                         const TrainConfig& train_config,
                         const DetectorConfig& detector_config) {
  if (raw_train.empty()) {
    raise(ErrorCode::kEmptyTrainingSet, "build_system");
  }
  DriftSystem system;
  system.schema = schema;
  system.labels = labels;
  system.normalizer = fit_normalizer(raw_train);

  const Dataset normalized = apply_normalizer(system.normalizer, raw_train);
  EmbeddingModel model = init_model(arch, train_config.seed);
  TrainResult result = train(std::move(model), normalized, train_config);
  system.model = std::move(result.model);
  system.reps = std::move(result.reps);

  system.detector.config = detector_config;
  std::vector<Eigen::VectorXd> embeddings;
  embeddings.reserve(normalized.size());
  for (const auto& rec : normalized) {
    embeddings.push_back(system.model.encode(rec.x));
  }
  const auto ys = labels_of(normalized);
  system.detector.prototypes = fit_prototypes(embeddings, ys);
  calibrate_thresholds(system.detector, embeddings, ys);
  return system;
}

std::vector<Eigen::VectorXd> encode_records(const DriftSystem& system,
                                            const Dataset& records) {
  std::vector<Eigen::VectorXd> embeddings;
  embeddings.reserve(records.size());
  for (const auto& rec : records) {
    embeddings.push_back(system.model.encode(system.normalizer.apply(rec.x)));
  }
  return embeddings;
}

std::vector<DriftVerdict> detect_window(const DriftSystem& system,
                                        const Dataset& window,
                                        int window_index) {
  const auto embeddings = encode_records(system, window);
  return detect_embeddings(embeddings, system.detector, window_index);
}

void refit_detector(DriftSystem& system, const Dataset& raw_train) {
  const Dataset normalized = apply_normalizer(system.normalizer, raw_train);
  std::vector<Eigen::VectorXd> embeddings;
  embeddings.reserve(normalized.size());
  for (const auto& rec : normalized) {
    embeddings.push_back(system.model.encode(rec.x));
  }
  const auto ys = labels_of(normalized);
  system.detector.prototypes = fit_prototypes(embeddings, ys);
  calibrate_thresholds(system.detector, embeddings, ys);
}

}  // namespace driftguard
