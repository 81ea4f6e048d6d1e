#pragma once

#include "driftguard/schema.hpp"

namespace driftguard {

// Per-feature z-score fitted on training data only. Standard deviations are
// floored so constant features stay finite.
struct Normalizer {
  static constexpr double kStdFloor = 1e-6;

  Eigen::VectorXd mean;
  Eigen::VectorXd std;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd invert(const Eigen::VectorXd& z) const;
  FeatureRecord apply(const FeatureRecord& rec) const;
};

Normalizer fit_normalizer(const Dataset& train);
Dataset apply_normalizer(const Normalizer& n, const Dataset& data);

}  // namespace driftguard
