#include "driftguard/splits.hpp"

#include <algorithm>
#include <cmath>

#include "driftguard/rng.hpp"

namespace driftguard {

SplitResult split_train_test(const Dataset& data, double train_fraction,
                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    raise(ErrorCode::kConfigError, "train_fraction must lie in (0, 1)");
  }
  auto by_class = indices_by_class(data);
  if (by_class.empty()) {
    raise(ErrorCode::kEmptyTrainingSet, "split_train_test: no labeled samples");
  }
  std::size_t labeled = 0;
  for (const auto& [label, idx] : by_class) {
    if (idx.size() < 2) {
      raise(ErrorCode::kClassTooSmall,
            "class " + std::to_string(label) + " has " +
                std::to_string(idx.size()) + " sample(s), need >= 2");
    }
    labeled += idx.size();
  }

  // Largest-remainder allocation of the global train quota across classes.
  const long target =
      std::lround(train_fraction * static_cast<double>(labeled));
  std::vector<int> labels;
  std::vector<long> take;
  std::vector<std::pair<double, int>> remainders;  // (-frac, position)
  long allocated = 0;
  for (const auto& [label, idx] : by_class) {
    const double quota = train_fraction * static_cast<double>(idx.size());
    long base = static_cast<long>(std::floor(quota));
    base = std::clamp(base, 1L, static_cast<long>(idx.size()) - 1);
    labels.push_back(label);
    take.push_back(base);
    remainders.emplace_back(-(quota - std::floor(quota)),
                            static_cast<int>(labels.size()) - 1);
    allocated += base;
  }
  std::sort(remainders.begin(), remainders.end());
  for (const auto& [neg_frac, pos] : remainders) {
    (void)neg_frac;
    if (allocated >= target) break;
    const auto cap =
        static_cast<long>(by_class[labels[static_cast<std::size_t>(pos)]].size()) - 1;
    if (take[static_cast<std::size_t>(pos)] < cap) {
      ++take[static_cast<std::size_t>(pos)];
      ++allocated;
    }
  }

  Rng rng(seed);
  SplitResult out;
  std::size_t class_rank = 0;  // matches the order labels/take were filled
  for (const auto& [label, idx] : by_class) {
    (void)label;
    auto shuffled = idx;
    Rng class_rng = rng.fork(class_rank);
    class_rng.shuffle(shuffled);
    const auto n_train = static_cast<std::size_t>(take[class_rank]);
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
      (i < n_train ? out.train : out.test).push_back(data[shuffled[i]]);
    }
    ++class_rank;
  }
  return out;
}

DropResult drop_classes(const Dataset& train, int n_drop, std::uint64_t seed) {
  if (n_drop < 0) {
    raise(ErrorCode::kConfigError, "n_drop must be non-negative");
  }
  const auto ids = class_ids(train);
  if (n_drop >= static_cast<int>(ids.size())) {
    raise(ErrorCode::kTooManyDropped,
          "n_drop " + std::to_string(n_drop) + " of " +
              std::to_string(ids.size()) + " classes");
  }
  auto pool = ids;
  Rng rng(seed);
  rng.shuffle(pool);
  std::vector<int> dropped(pool.begin(), pool.begin() + n_drop);
  std::sort(dropped.begin(), dropped.end());

  DropResult out;
  out.dropped = dropped;
  for (const auto& rec : train) {
    if (!rec.has_label() ||
        !std::binary_search(dropped.begin(), dropped.end(), rec.label)) {
      out.train.push_back(rec);
    }
  }
  return out;
}

WindowedStream windowize(const Dataset& data, const FeatureSchema& schema,
                         int window_size, WindowOrder order,
                         std::uint64_t seed) {
  if (window_size < 1) {
    raise(ErrorCode::kConfigError, "window_size must be >= 1");
  }
  std::vector<std::size_t> idx(data.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (order == WindowOrder::kShuffled) {
    Rng rng(seed);
    rng.shuffle(idx);
  }

  WindowedStream stream;
  stream.schema = schema;
  stream.provenance = order == WindowOrder::kShuffled
                          ? "windowize(shuffled, seed=" + std::to_string(seed) + ")"
                          : "windowize(given)";
  for (std::size_t start = 0; start < idx.size();
       start += static_cast<std::size_t>(window_size)) {
    const std::size_t stop =
        std::min(idx.size(), start + static_cast<std::size_t>(window_size));
    Dataset window;
    window.reserve(stop - start);
    for (std::size_t i = start; i < stop; ++i) {
      FeatureRecord rec = data[idx[i]];
      rec.window = static_cast<int>(stream.windows.size());
      window.push_back(std::move(rec));
    }
    stream.windows.push_back(std::move(window));
  }
  return stream;
}

}  // namespace driftguard
