#pragma once

#include "driftguard/system.hpp"

namespace driftguard {

// An accumulating cluster of drifted embeddings that has not yet been
// promoted to a class.
struct PendingConcept {
  struct Member {
    FeatureRecord record;  // raw features, original label if any
    Eigen::VectorXd embedding;
    int window = 0;
  };

  int pending_id = -1;
  std::vector<Member> members;
  Eigen::VectorXd centroid;           // exact mean of member embeddings
  Eigen::VectorXd accumulated_delta;  // sum of window-to-window centroid moves
  Eigen::VectorXd last_centroid;      // snapshot at the previous window close
  bool existed_last_window = false;
};

struct DiscoveryConfig {
  double promote_threshold = 3.5;  // T
  int min_members = 50;            // N_min
  // Pending-centroid assignment radius (embedding-space Euclidean);
  // <= 0 resolves to the median calibrated theta of the known classes.
  double assign_radius = -1.0;
};

struct PromotionEvent {
  int window = 0;
  int class_id = -1;
  int member_count = 0;
  double centroid_norm = 0.0;
  double accumulated_delta_norm = 0.0;
};

struct DiscoveryState {
  std::vector<PendingConcept> pending;
  int next_class_id = 0;
  int next_pending_id = 0;
  std::vector<PromotionEvent> history;
};

DiscoveryState make_discovery_state(const DetectorState& detector);

double resolve_assign_radius(const DiscoveryConfig& config,
                             const DetectorState& detector);

// Routes each drifted sample of the window to the nearest pending concept
// within the assignment radius (seeding new concepts otherwise), refreshes
// centroids, and adds each surviving concept's centroid displacement to its
// accumulated delta. Drift verdicts are annotated with the pending id.
void accumulate(DiscoveryState& state, std::vector<DriftVerdict>& verdicts,
                const std::vector<Eigen::VectorXd>& embeddings,
                const Dataset& window_records, const DetectorState& detector,
                const DiscoveryConfig& config);

struct Promotion {
  int class_id = -1;
  std::vector<PendingConcept::Member> members;  // original labels preserved
};

// Promotes every pending concept with >= min_members members whose
// accumulated delta norm plus distance to the nearest known prototype
// (in D units) exceeds the threshold. Promoted concepts leave the pending
// set and receive consecutive new class ids.
std::vector<Promotion> check_promotion(DiscoveryState& state,
                                       const DetectorState& detector,
                                       const DiscoveryConfig& config,
                                       int window_index);

// Retrains the embedding network on the original training set plus the
// promoted members (relabeled to their new class ids), then refits
// prototypes and thresholds. The raw training set is extended in place.
void integrate(DriftSystem& system, const std::vector<Promotion>& promotions,
               Dataset& raw_train, const TrainConfig& train_config);

struct StreamRunLog {
  std::vector<DriftVerdict> verdicts;     // across all windows
  std::vector<PromotionEvent> promotions;
  // Ground-truth label majorities of promoted members, keyed by new class
  // id; -1 when members carried no labels. Used by evaluation protocols.
  std::map<int, int> promoted_label_majority;
};

// Sequential per-window loop: detect -> accumulate -> check_promotion ->
// integrate when promotions occurred.
StreamRunLog run_stream(DriftSystem& system, const WindowedStream& stream,
                        Dataset& raw_train, const TrainConfig& train_config,
                        const DiscoveryConfig& discovery_config);

}  // namespace driftguard
