#pragma once

#include "driftguard/detector.hpp"
#include "driftguard/embedding.hpp"
#include "driftguard/normalizer.hpp"
#include "driftguard/schema.hpp"

namespace driftguard {

// Everything needed to score incoming windows: the fitted normalizer, the
// trained embedding network with its class representations, and the
// calibrated NCM detector.
struct DriftSystem {
  FeatureSchema schema;
  LabelMap labels;
  Normalizer normalizer;
  EmbeddingModel model;
  ClassRepresentations reps;
  DetectorState detector;
};

// Fits the normalizer on raw_train, trains the embedding network, fits
// prototypes on the training embeddings and calibrates drift thresholds.
DriftSystem build_system(const FeatureSchema& schema, const LabelMap& labels,
                         const Dataset& raw_train, const Architecture& arch,
                         const TrainConfig& train_config,
                         const DetectorConfig& detector_config);

std::vector<Eigen::VectorXd> encode_records(const DriftSystem& system,
                                            const Dataset& records);

// Normalize + encode + classify one window against calibrated thresholds.
std::vector<DriftVerdict> detect_window(const DriftSystem& system,
                                        const Dataset& window,
                                        int window_index);

// Refits prototypes and thresholds from a raw training set without touching
// the embedding network.
void refit_detector(DriftSystem& system, const Dataset& raw_train);

}  // namespace driftguard
