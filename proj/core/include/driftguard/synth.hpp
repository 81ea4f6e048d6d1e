#pragma once

#include <cstdint>
#include <string>

#include "driftguard/schema.hpp"

namespace driftguard {

enum class DriftKind { kSudden, kIncremental, kGradual, kRecurring };

DriftKind drift_kind_from_string(const std::string& s);
const char* drift_kind_name(DriftKind kind);

// Gaussian-blob classes with unit isotropic spread; means are placed so the
// minimum pairwise distance equals class_separation. Classes 0..n-2 form the
// old concept, class n-1 is the new concept introduced by the drift pattern.
struct SynthDriftConfig {
  DriftKind kind = DriftKind::kSudden;
  int n_classes = 2;
  int dim = 2;
  int n_windows = 10;
  int samples_per_window = 100;
  double class_separation = 6.0;
  std::uint64_t seed = 0;
  int switch_window = -1;  // sudden; -1 -> n_windows / 2
  int recur_period = 0;    // recurring block length; 0 -> n_windows / 4
};

struct SampleTruth {
  int concept_id = 0;
  bool is_drifted = false;  // sample drawn from the new concept
};

struct AnnotatedStream {
  WindowedStream stream;
  std::vector<std::vector<SampleTruth>> truth;  // parallel to stream.windows
};

AnnotatedStream synth_drift_stream(const SynthDriftConfig& config);

// Deterministic class mean placement shared by the generators; exposed so
// tests can recompute expected geometry.
Eigen::VectorXd synth_class_mean(int class_id, int dim, double separation);

// Labeled i.i.d. blob dataset (no windowing), per_class samples per class.
Dataset make_gaussian_dataset(int n_classes, int dim, int per_class,
                              double separation, std::uint64_t seed);

// label names class_0..class_{n-1}
LabelMap synthetic_label_map(int n_classes);

}  // namespace driftguard
