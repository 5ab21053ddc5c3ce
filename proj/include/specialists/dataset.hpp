#pragma once

#include <cstdint>
#include <vector>

#include "specialists/types.hpp"

namespace specialists {

/// One set of classes whose feature distributions are pushed together.
/// overlap 0 keeps the full intra-group mean separation; overlap 1 collapses
/// the group's class means onto a single point.
struct ConfusabilityGroup {
  std::vector<int> classes;
  double overlap = 0.0;
};

struct SyntheticDataset {
  Matrix features;  // n x d
  std::vector<int> labels;
  std::vector<int> train_indices;
  std::vector<int> validation_indices;
  std::vector<int> test_indices;
  int num_classes = 0;

  Eigen::Index num_samples() const { return features.rows(); }
  Eigen::Index dims() const { return features.cols(); }
};

/// Gaussian class clusters: every confusability group gets a far-away group
/// center, every class a direction offset from its group center scaled by
/// (1 - overlap), unit noise on top. Groups must partition {0..C-1}; the
/// sample count must be divisible by 12 so the 45:5:10 split is exact.
/// Deterministic per seed.
SyntheticDataset generate_dataset(const std::vector<ConfusabilityGroup>& groups,
                                  int num_samples, int dims, std::uint64_t seed);

}  // namespace specialists
