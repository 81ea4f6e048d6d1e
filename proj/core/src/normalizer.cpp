#include "driftguard/normalizer.hpp"

#include <cmath>

namespace driftguard {

Eigen::VectorXd Normalizer::apply(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size()) {
    raise(ErrorCode::kDimensionMismatch,
          "normalizer dim " + std::to_string(mean.size()) + " vs input " +
              std::to_string(x.size()));
  }
  return (x - mean).cwiseQuotient(std);
}

Eigen::VectorXd Normalizer::invert(const Eigen::VectorXd& z) const {
  if (z.size() != mean.size()) {
    raise(ErrorCode::kDimensionMismatch, "invert dimension mismatch");
  }
  return z.cwiseProduct(std) + mean;
}

FeatureRecord Normalizer::apply(const FeatureRecord& rec) const {
  FeatureRecord out = rec;
  out.x = apply(rec.x);
  return out;
}

Normalizer fit_normalizer(const Dataset& train) {
  if (train.empty()) {
    raise(ErrorCode::kEmptyTrainingSet, "fit_normalizer");
  }
  const Eigen::Index dim = train.front().x.size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& rec : train) {
    if (rec.x.size() != dim) {
      raise(ErrorCode::kDimensionMismatch, "inconsistent record dimensions");
    }
    mean += rec.x;
  }
  mean /= static_cast<double>(train.size());

  Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
  for (const auto& rec : train) {
    var += (rec.x - mean).cwiseAbs2();
  }
  var /= static_cast<double>(train.size());

  Normalizer n;
  n.mean = std::move(mean);
  n.std = var.cwiseSqrt().cwiseMax(Normalizer::kStdFloor);
  return n;
}

Dataset apply_normalizer(const Normalizer& n, const Dataset& data) {
  Dataset out;
  out.reserve(data.size());
  for (const auto& rec : data) {
    out.push_back(n.apply(rec));
  }
  return out;
}

}  // namespace driftguard
