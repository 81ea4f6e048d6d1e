#pragma once

#include <cstdint>

#include "driftguard/schema.hpp"

namespace driftguard {

struct SplitResult {
  Dataset train;
  Dataset test;
};

// Stratified split. Per-class train counts follow the largest-remainder
// allocation of round(train_fraction * n) total samples, clamped so every
// class keeps at least one sample on each side. Deterministic per seed.
SplitResult split_train_test(const Dataset& data, double train_fraction,
                             std::uint64_t seed);

struct DropResult {
  Dataset train;
  std::vector<int> dropped;  // sorted class ids
};

// Removes all samples of n_drop seed-chosen classes from the training set.
DropResult drop_classes(const Dataset& train, int n_drop, std::uint64_t seed);

enum class WindowOrder { kGiven, kShuffled };

// Contiguous chunks of window_size; the last window may be smaller. Record
// window fields are rewritten to the produced indices.
WindowedStream windowize(const Dataset& data, const FeatureSchema& schema,
                         int window_size, WindowOrder order,
                         std::uint64_t seed = 0);

}  // namespace driftguard
