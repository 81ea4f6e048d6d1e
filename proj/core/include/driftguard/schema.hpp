#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "driftguard/common.hpp"

namespace driftguard {

// Flat feature layout of one dataset.
struct FeatureSchema {
  std::string name;
  int dim = 0;
  std::vector<std::string> feature_names;
  // Optional per-feature (min, max) in feature units; empty when absent.
  std::vector<std::pair<double, double>> bounds;

  void validate() const;

  // Placeholder names f0..f{dim-1}.
  static FeatureSchema dense(int dim, std::string name = "dense");
};

// One sample. `label` is -1 when unknown; `window` is the time-window index.
struct FeatureRecord {
  Eigen::VectorXd x;
  int label = -1;
  int window = 0;

  bool has_label() const { return label >= 0; }
};

using Dataset = std::vector<FeatureRecord>;

// Dense class ids assigned in first-appearance order of the label strings.
class LabelMap {
 public:
  int intern(const std::string& name);
  int find(const std::string& name) const;  // -1 when unknown
  const std::string& name(int id) const;
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> ids_;
};

struct WindowedStream {
  std::vector<Dataset> windows;
  FeatureSchema schema;
  std::string provenance;

  std::size_t total_samples() const;
};

// Sorted distinct labels present in a dataset (unlabeled records ignored).
std::vector<int> class_ids(const Dataset& data);

// Label -> indices, in dataset order.
std::map<int, std::vector<std::size_t>> indices_by_class(const Dataset& data);

// Window-major concatenation; record window fields are preserved.
Dataset flatten(const WindowedStream& stream);

}  // namespace driftguard
