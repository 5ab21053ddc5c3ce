#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "specialists/dataset.hpp"
#include "specialists/rng.hpp"

namespace specialists {

namespace {

// Geometry: group centers at least kMinCenterDistance apart, class means at
// most kOffsetRadius from their center, unit noise. Worst-case cross-group
// class-mean distance is 27 - 2*7 = 13 sigma, so cross-group confusion is
// negligible and the confusion structure is controlled by the overlap levels.
constexpr double kCenterRadius = 24.0;
constexpr double kMinCenterDistance = 27.0;
constexpr double kOffsetRadius = 7.0;
constexpr double kMinOffsetDistance = 1.0;
constexpr int kPlacementAttempts = 200;

Vector random_unit(Rng& rng, int dims) {
  Vector v(dims);
  double norm = 0.0;
  do {
    for (int i = 0; i < dims; ++i) v(i) = rng.normal();
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

/// Rejection-sample a point at least min_distance from all existing points;
/// after the attempt cap, the candidate with the largest nearest-neighbor
/// distance wins, keeping generation total.
Vector place_point(Rng& rng, int dims, double radius,
                   const std::vector<Vector>& existing, double min_distance) {
  Vector best;
  double best_clearance = -1.0;
  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    Vector candidate = radius * random_unit(rng, dims);
    double clearance = std::numeric_limits<double>::infinity();
    for (const Vector& p : existing) {
      clearance = std::min(clearance, (candidate - p).norm());
    }
    if (clearance >= min_distance) return candidate;
    if (clearance > best_clearance) {
      best_clearance = clearance;
      best = std::move(candidate);
    }
  }
  return best;
}

void validate_spec(const std::vector<ConfusabilityGroup>& groups, int num_samples,
                   int dims, int num_classes) {
  if (groups.empty()) {
    throw std::invalid_argument("confusability spec has no groups");
  }
  std::vector<char> seen(num_classes, 0);
  for (const ConfusabilityGroup& group : groups) {
    if (group.classes.empty()) {
      throw std::invalid_argument("confusability group is empty");
    }
    if (group.overlap < 0.0 || group.overlap > 1.0) {
      throw std::invalid_argument("overlap must be in [0, 1]");
    }
    for (int cls : group.classes) {
      if (cls < 0 || cls >= num_classes || seen[cls]) {
        throw std::invalid_argument("groups must partition the class set");
      }
      seen[cls] = 1;
    }
  }
  if (num_classes < 2) {
    throw std::invalid_argument("need at least two classes");
  }
  if (dims < 2) {
    throw std::invalid_argument("need at least two feature dimensions");
  }
  if (num_samples < num_classes || num_samples % 12 != 0) {
    throw std::invalid_argument(
        "sample count must cover every class and be divisible by 12 for the "
        "45:5:10 split");
  }
}

}  // namespace

SyntheticDataset generate_dataset(const std::vector<ConfusabilityGroup>& groups,
                                  int num_samples, int dims, std::uint64_t seed) {
  int num_classes = 0;
  for (const ConfusabilityGroup& group : groups) {
    num_classes += static_cast<int>(group.classes.size());
  }
  validate_spec(groups, num_samples, dims, num_classes);

  Rng rng(mix_seed(seed));

  std::vector<Vector> centers;
  centers.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    centers.push_back(
        place_point(rng, dims, kCenterRadius, centers, kMinCenterDistance));
  }

  // Per-class mean: group center plus a direction offset shrunk by the
  // group's overlap level. overlap 1 collapses the group exactly.
  std::vector<Vector> class_means(num_classes);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<Vector> offsets;
    offsets.reserve(groups[g].classes.size());
    for (int cls : groups[g].classes) {
      offsets.push_back(
          place_point(rng, dims, 1.0, offsets, kMinOffsetDistance));
      class_means[cls] = centers[g] + (1.0 - groups[g].overlap) * kOffsetRadius *
                                          offsets.back();
    }
  }

  SyntheticDataset dataset;
  dataset.num_classes = num_classes;
  dataset.features.resize(num_samples, dims);
  dataset.labels.resize(num_samples);
  for (int i = 0; i < num_samples; ++i) {
    const int label = i % num_classes;
    dataset.labels[i] = label;
    for (int j = 0; j < dims; ++j) {
      dataset.features(i, j) = class_means[label](j) + rng.normal();
    }
  }

  std::vector<int> order(num_samples);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  const int train_end = num_samples / 12 * 9;
  const int validation_end = num_samples / 12 * 10;
  dataset.train_indices.assign(order.begin(), order.begin() + train_end);
  dataset.validation_indices.assign(order.begin() + train_end,
                                    order.begin() + validation_end);
  dataset.test_indices.assign(order.begin() + validation_end, order.end());
  std::sort(dataset.train_indices.begin(), dataset.train_indices.end());
  std::sort(dataset.validation_indices.begin(), dataset.validation_indices.end());
  std::sort(dataset.test_indices.begin(), dataset.test_indices.end());
  return dataset;
}

}  // namespace specialists
