#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "driftguard/schema.hpp"

namespace driftguard {

inline constexpr double kVarFloor = 1e-6;

// Per-class summary in embedding space: mean, floored diagonal variance,
// sample count and, after calibration, the drift threshold in D units.
struct ClassPrototype {
  int class_id = -1;
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  long count = 0;
  double theta = -1.0;  // < 0 until calibrated
};

enum class DistanceMode { kCombined, kEuclideanOnly };

struct DetectorConfig {
  double lambda1 = 0.1;
  int k_local = 10;
  double drift_z = 3.0;
  DistanceMode mode = DistanceMode::kCombined;
};

struct DetectorState {
  std::map<int, ClassPrototype> prototypes;
  DetectorConfig config;

  bool calibrated() const;
};

// Per-sample decision. distance == d_r + lambda1 * d_e for the combined mode
// (d_r is reported as 0 under the euclidean-only ablation).
struct DriftVerdict {
  int predicted_class = -1;
  double distance = 0.0;
  double d_r = 0.0;
  double d_e = 0.0;
  bool drifted = false;
  int window = 0;
  int sample_index = 0;
  int pending_id = -1;  // filled by concept discovery
};

// Exact per-class means, population variances (floored), counts.
std::map<int, ClassPrototype> fit_prototypes(
    std::span<const Eigen::VectorXd> embeddings, std::span<const int> labels);

double euclidean_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Jeffreys (symmetric KL) divergence between diagonal Gaussians
// N(mean_p, var_p) and N(mean_q, var_q).
double jeffreys_divergence(const Eigen::VectorXd& mean_p,
                           const Eigen::VectorXd& var_p,
                           const Eigen::VectorXd& mean_q,
                           const Eigen::VectorXd& var_q);

// Floored per-dimension variance over the k nearest neighbors of h within
// the window (h included when present). nullopt when the window has fewer
// than two points; callers then fall back to the candidate class variance.
std::optional<Eigen::VectorXd> local_covariance(
    const Eigen::VectorXd& h, std::span<const Eigen::VectorXd> window,
    int k_local);

struct DistanceParts {
  double d = 0.0;
  double d_r = 0.0;
  double d_e = 0.0;
};

// D = d_r + lambda1 * d_e against one prototype, with the sample's group
// modeled as N(h, local_var).
DistanceParts combined_distance(const Eigen::VectorXd& h,
                                const Eigen::VectorXd& local_var,
                                const ClassPrototype& proto,
                                const DetectorConfig& config);

// Nearest prototype under D; ties break toward the smallest class id. The
// drift flag is left unset.
DriftVerdict classify(const Eigen::VectorXd& h,
                      std::span<const Eigen::VectorXd> window_embeddings,
                      const DetectorState& state);

// theta_c = mean + drift_z * std of own-class training distances, with the
// class's full training embedding set as the local-variance context.
void calibrate_thresholds(DetectorState& state,
                          std::span<const Eigen::VectorXd> embeddings,
                          std::span<const int> labels);

// Classifies every embedding of one window and applies the calibrated
// per-class thresholds.
std::vector<DriftVerdict> detect_embeddings(
    std::span<const Eigen::VectorXd> window_embeddings,
    const DetectorState& state, int window_index);

}  // namespace driftguard
