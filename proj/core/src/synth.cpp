#include "driftguard/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "driftguard/rng.hpp"

namespace driftguard {

DriftKind drift_kind_from_string(const std::string& s) {
  if (s == "sudden") return DriftKind::kSudden;
  if (s == "incremental") return DriftKind::kIncremental;
  if (s == "gradual") return DriftKind::kGradual;
  if (s == "recurring") return DriftKind::kRecurring;
  raise(ErrorCode::kConfigError, "unknown drift kind '" + s + "'");
}

const char* drift_kind_name(DriftKind kind) {
  switch (kind) {
    case DriftKind::kSudden: return "sudden";
    case DriftKind::kIncremental: return "incremental";
    case DriftKind::kGradual: return "gradual";
    case DriftKind::kRecurring: return "recurring";
  }
  return "?";
}

Eigen::VectorXd synth_class_mean(int class_id, int dim, double separation) {
  // Axis-aligned placement: class k sits on axis k % dim. Rings on the same
  // axis are spaced by separation, cross-axis pairs sit separation / sqrt(2)
  // out on two axes, so any two distinct means are >= separation apart.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  const int axis = class_id % dim;
  const int ring = class_id / dim;
  mean[axis] = separation / std::numbers::sqrt2 *
               (1.0 + std::numbers::sqrt2 * static_cast<double>(ring));
  return mean;
}

namespace {

Eigen::VectorXd draw_sample(int class_id, int dim, double separation,
                            Rng& rng) {
  Eigen::VectorXd x = synth_class_mean(class_id, dim, separation);
  for (int d = 0; d < dim; ++d) {
    x[d] += rng.normal();
  }
  return x;
}

// Old concept is the uniform mixture of classes 0..n-2.
int draw_old_class(int n_classes, Rng& rng) {
  if (n_classes <= 2) return 0;
  return static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n_classes - 1)));
}

}  // namespace

AnnotatedStream synth_drift_stream(const SynthDriftConfig& config) {
  if (config.n_classes < 2) {
    raise(ErrorCode::kConfigError, "synth_drift_stream: n_classes must be >= 2");
  }
  if (config.dim < 2) {
    raise(ErrorCode::kConfigError, "synth_drift_stream: dim must be >= 2");
  }
  if (config.n_windows < 1 || config.samples_per_window < 1) {
    raise(ErrorCode::kConfigError, "synth_drift_stream: empty stream requested");
  }

  const int new_class = config.n_classes - 1;
  const int switch_window =
      config.switch_window >= 0 ? config.switch_window : config.n_windows / 2;
  const int period =
      config.recur_period > 0 ? config.recur_period
                              : std::max(1, config.n_windows / 4);
  const double denom =
      config.n_windows > 1 ? static_cast<double>(config.n_windows - 1) : 1.0;

  Rng base(config.seed);
  AnnotatedStream out;
  out.stream.schema = FeatureSchema::dense(config.dim, "synthetic");
  out.stream.provenance =
      std::string("synth_drift_stream(") + drift_kind_name(config.kind) +
      ", seed=" + std::to_string(config.seed) + ")";

  for (int t = 0; t < config.n_windows; ++t) {
    Rng rng = base.fork(static_cast<std::uint64_t>(t));
    Dataset window;
    std::vector<SampleTruth> truth;
    window.reserve(static_cast<std::size_t>(config.samples_per_window));
    truth.reserve(static_cast<std::size_t>(config.samples_per_window));

    // Per-window rule for drawing from the new concept.
    bool whole_window_new = false;
    double new_fraction = 0.0;
    switch (config.kind) {
      case DriftKind::kSudden:
        whole_window_new = t >= switch_window;
        new_fraction = whole_window_new ? 1.0 : 0.0;
        break;
      case DriftKind::kIncremental:
        new_fraction = static_cast<double>(t) / denom;
        break;
      case DriftKind::kGradual:
        // Entire windows alternate concepts; the old concept appears with
        // decreasing frequency.
        whole_window_new = rng.bernoulli(static_cast<double>(t) / denom);
        new_fraction = whole_window_new ? 1.0 : 0.0;
        break;
      case DriftKind::kRecurring:
        // Blocks of `period` windows alternate old / new / old / ...
        whole_window_new = (t / period) % 2 == 1;
        new_fraction = whole_window_new ? 1.0 : 0.0;
        break;
    }

    for (int i = 0; i < config.samples_per_window; ++i) {
      bool from_new = whole_window_new;
      if (config.kind == DriftKind::kIncremental) {
        from_new = rng.bernoulli(new_fraction);
      }
      const int cls = from_new ? new_class : draw_old_class(config.n_classes, rng);
      FeatureRecord rec;
      rec.x = draw_sample(cls, config.dim, config.class_separation, rng);
      rec.label = cls;
      rec.window = t;
      window.push_back(std::move(rec));
      truth.push_back({cls, from_new});
    }
    out.stream.windows.push_back(std::move(window));
    out.truth.push_back(std::move(truth));
  }
  return out;
}

Dataset make_gaussian_dataset(int n_classes, int dim, int per_class,
                              double separation, std::uint64_t seed) {
  if (n_classes < 1 || dim < 1 || per_class < 1) {
    raise(ErrorCode::kConfigError, "make_gaussian_dataset: bad shape");
  }
  Rng base(seed);
  Dataset out;
  out.reserve(static_cast<std::size_t>(n_classes) *
              static_cast<std::size_t>(per_class));
  for (int c = 0; c < n_classes; ++c) {
    Rng rng = base.fork(static_cast<std::uint64_t>(c));
    for (int i = 0; i < per_class; ++i) {
      FeatureRecord rec;
      rec.x = draw_sample(c, dim, separation, rng);
      rec.label = c;
      out.push_back(std::move(rec));
    }
  }
  return out;
}

LabelMap synthetic_label_map(int n_classes) {
  LabelMap map;
  for (int c = 0; c < n_classes; ++c) {
    map.intern("class_" + std::to_string(c));
  }
  return map;
}

}  // namespace driftguard
