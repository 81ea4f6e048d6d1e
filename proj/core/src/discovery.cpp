#include "driftguard/discovery.hpp"

#include <algorithm>
#include <limits>

namespace driftguard {

DiscoveryState make_discovery_state(const DetectorState& detector) {
  DiscoveryState state;
  int max_id = -1;
  for (const auto& [id, proto] : detector.prototypes) {
    (void)proto;
    max_id = std::max(max_id, id);
  }
  state.next_class_id = max_id + 1;
  return state;
}

double resolve_assign_radius(const DiscoveryConfig& config,
                             const DetectorState& detector) {
  if (config.assign_radius > 0.0) {
    return config.assign_radius;
  }
  std::vector<double> thetas;
  thetas.reserve(detector.prototypes.size());
  for (const auto& [id, proto] : detector.prototypes) {
    (void)id;
    if (proto.theta >= 0.0) thetas.push_back(proto.theta);
  }
  if (thetas.empty()) {
    raise(ErrorCode::kNoPrototypes,
          "assign_radius default needs calibrated thresholds");
  }
  std::sort(thetas.begin(), thetas.end());
  const std::size_t n = thetas.size();
  return n % 2 == 1 ? thetas[n / 2]
                    : 0.5 * (thetas[n / 2 - 1] + thetas[n / 2]);
}

namespace {

void refresh_centroid(PendingConcept& cluster) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(cluster.members.front().embedding.size());
  for (const auto& member : cluster.members) {
    sum += member.embedding;
  }
  cluster.centroid = sum / static_cast<double>(cluster.members.size());
}

// Population variance of member embeddings, floored; models the pending
// cluster as a diagonal Gaussian for D-unit distances.
Eigen::VectorXd member_variance(const PendingConcept& cluster) {
  Eigen::VectorXd var = Eigen::VectorXd::Zero(cluster.centroid.size());
  for (const auto& member : cluster.members) {
    var += (member.embedding - cluster.centroid).cwiseAbs2();
  }
  var /= static_cast<double>(cluster.members.size());
  return var.cwiseMax(kVarFloor);
}

}  // namespace

void accumulate(DiscoveryState& state, std::vector<DriftVerdict>& verdicts,
                const std::vector<Eigen::VectorXd>& embeddings,
                const Dataset& window_records, const DetectorState& detector,
                const DiscoveryConfig& config) {
  if (verdicts.size() != embeddings.size() ||
      verdicts.size() != window_records.size()) {
    raise(ErrorCode::kLengthMismatch, "accumulate");
  }
  const double radius = resolve_assign_radius(config, detector);

  for (auto& cluster : state.pending) {
    cluster.existed_last_window = true;
    cluster.last_centroid = cluster.centroid;
  }

  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    if (!verdicts[i].drifted) continue;
    const Eigen::VectorXd& h = embeddings[i];

    PendingConcept* nearest = nullptr;
    double nearest_dist = std::numeric_limits<double>::infinity();
    for (auto& cluster : state.pending) {
      const double d = (cluster.centroid - h).norm();
      if (d < nearest_dist) {
        nearest_dist = d;
        nearest = &cluster;
      }
    }

    PendingConcept::Member member{window_records[i], h, verdicts[i].window};
    if (nearest != nullptr && nearest_dist <= radius) {
      nearest->members.push_back(std::move(member));
      refresh_centroid(*nearest);
      verdicts[i].pending_id = nearest->pending_id;
    } else {
      PendingConcept cluster;
      cluster.pending_id = state.next_pending_id++;
      cluster.members.push_back(std::move(member));
      cluster.centroid = h;
      cluster.accumulated_delta = Eigen::VectorXd::Zero(h.size());
      cluster.last_centroid = h;
      cluster.existed_last_window = false;
      verdicts[i].pending_id = cluster.pending_id;
      state.pending.push_back(std::move(cluster));
    }
  }

  // Close the window: concepts that existed before it contribute their
  // centroid displacement; freshly seeded ones only snapshot.
  for (auto& cluster : state.pending) {
    if (cluster.existed_last_window) {
      cluster.accumulated_delta += cluster.centroid - cluster.last_centroid;
    }
    cluster.last_centroid = cluster.centroid;
  }
}

std::vector<Promotion> check_promotion(DiscoveryState& state,
                                       const DetectorState& detector,
                                       const DiscoveryConfig& config,
                                       int window_index) {
  std::vector<Promotion> promotions;
  std::vector<PendingConcept> kept;
  kept.reserve(state.pending.size());

  for (auto& cluster : state.pending) {
    bool promote = false;
    double delta_norm = 0.0;
    if (static_cast<int>(cluster.members.size()) >= config.min_members) {
      delta_norm = cluster.accumulated_delta.norm();
      double min_d = std::numeric_limits<double>::infinity();
      const Eigen::VectorXd var = member_variance(cluster);
      for (const auto& [id, proto] : detector.prototypes) {
        (void)id;
        min_d = std::min(
            min_d,
            combined_distance(cluster.centroid, var, proto, detector.config).d);
      }
      promote = delta_norm + min_d > config.promote_threshold;
    }

    if (promote) {
      Promotion promotion;
      promotion.class_id = state.next_class_id++;
      promotion.members = std::move(cluster.members);
      state.history.push_back({window_index, promotion.class_id,
                               static_cast<int>(promotion.members.size()),
                               cluster.centroid.norm(), delta_norm});
      promotions.push_back(std::move(promotion));
    } else {
      kept.push_back(std::move(cluster));
    }
  }
  state.pending = std::move(kept);
  return promotions;
}

void integrate(DriftSystem& system, const std::vector<Promotion>& promotions,
               Dataset& raw_train, const TrainConfig& train_config) {
  if (promotions.empty()) {
    raise(ErrorCode::kEmptyClass, "integrate: no promoted members");
  }
  for (const auto& promotion : promotions) {
    if (promotion.members.empty()) {
      raise(ErrorCode::kEmptyClass, "integrate: empty promotion");
    }
    for (const auto& member : promotion.members) {
      FeatureRecord rec = member.record;
      rec.label = promotion.class_id;
      raw_train.push_back(std::move(rec));
    }
    system.labels.intern("discovered_" + std::to_string(promotion.class_id));
  }

  const Dataset normalized = apply_normalizer(system.normalizer, raw_train);
  TrainResult result =
      train(std::move(system.model), normalized, train_config);
  system.model = std::move(result.model);
  system.reps = std::move(result.reps);
  refit_detector(system, raw_train);
}

StreamRunLog run_stream(DriftSystem& system, const WindowedStream& stream,
                        Dataset& raw_train, const TrainConfig& train_config,
                        const DiscoveryConfig& discovery_config) {
  if (!system.detector.calibrated()) {
    raise(ErrorCode::kNoPrototypes, "run_stream: detector not calibrated");
  }
  StreamRunLog log;
  DiscoveryState discovery = make_discovery_state(system.detector);

  for (std::size_t w = 0; w < stream.windows.size(); ++w) {
    const Dataset& window = stream.windows[w];
    const auto embeddings = encode_records(system, window);
    auto verdicts =
        detect_embeddings(embeddings, system.detector, static_cast<int>(w));
    accumulate(discovery, verdicts, embeddings, window, system.detector,
               discovery_config);
    const auto promotions = check_promotion(discovery, system.detector,
                                            discovery_config,
                                            static_cast<int>(w));
    if (!promotions.empty()) {
      for (const auto& promotion : promotions) {
        std::map<int, int> counts;
        for (const auto& member : promotion.members) {
          if (member.record.has_label()) ++counts[member.record.label];
        }
        int majority = -1;
        int best = 0;
        for (const auto& [label, count] : counts) {
          if (count > best) {
            best = count;
            majority = label;
          }
        }
        log.promoted_label_majority[promotion.class_id] = majority;
      }
      integrate(system, promotions, raw_train, train_config);
    }
    log.verdicts.insert(log.verdicts.end(), verdicts.begin(), verdicts.end());
  }
  log.promotions = discovery.history;
  return log;
}

}  // namespace driftguard
