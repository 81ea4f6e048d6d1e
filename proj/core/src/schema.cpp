#include "driftguard/schema.hpp"

namespace driftguard {

void FeatureSchema::validate() const {
  if (dim <= 0) {
    raise(ErrorCode::kConfigError, "schema dim must be positive");
  }
  if (static_cast<int>(feature_names.size()) != dim) {
    raise(ErrorCode::kConfigError,
          "schema '" + name + "' has " + std::to_string(feature_names.size()) +
              " feature names for dim " + std::to_string(dim));
  }
  if (!bounds.empty()) {
    if (static_cast<int>(bounds.size()) != dim) {
      raise(ErrorCode::kConfigError, "bounds size does not match dim");
    }
    for (const auto& [lo, hi] : bounds) {
      if (lo > hi) {
        raise(ErrorCode::kConfigError, "bounds with min > max");
      }
    }
  }
}

FeatureSchema FeatureSchema::dense(int dim, std::string name) {
  FeatureSchema schema;
  schema.name = std::move(name);
  schema.dim = dim;
  schema.feature_names.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    schema.feature_names.push_back("f" + std::to_string(i));
  }
  schema.validate();
  return schema;
}

int LabelMap::intern(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

int LabelMap::find(const std::string& name) const {
  auto it = ids_.find(name);
  return it == ids_.end() ? -1 : it->second;
}

const std::string& LabelMap::name(int id) const {
  if (id < 0 || id >= size()) {
    raise(ErrorCode::kUnknownLabel, "label id " + std::to_string(id));
  }
  return names_[static_cast<std::size_t>(id)];
}

std::size_t WindowedStream::total_samples() const {
  std::size_t n = 0;
  for (const auto& w : windows) n += w.size();
  return n;
}

std::vector<int> class_ids(const Dataset& data) {
  std::vector<int> ids;
  for (const auto& [label, indices] : indices_by_class(data)) {
    (void)indices;
    ids.push_back(label);
  }
  return ids;
}

std::map<int, std::vector<std::size_t>> indices_by_class(const Dataset& data) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].has_label()) {
      by_class[data[i].label].push_back(i);
    }
  }
  return by_class;
}

Dataset flatten(const WindowedStream& stream) {
  Dataset out;
  out.reserve(stream.total_samples());
  for (const auto& window : stream.windows) {
    out.insert(out.end(), window.begin(), window.end());
  }
  return out;
}

}  // namespace driftguard
