#pragma once

#include <algorithm>
#include <vector>

#include "specialists/rng.hpp"
#include "specialists/types.hpp"

namespace specialists::testing {

/// Random valid prediction log: labels uniform in [0, C), probabilities
/// positive and normalized.
inline std::vector<PredictionRecord> random_records(Rng& rng, int num_classes,
                                                    int count) {
  std::vector<PredictionRecord> records(count);
  for (PredictionRecord& record : records) {
    record.true_label = static_cast<int>(rng.index(num_classes));
    record.probabilities.resize(num_classes);
    for (int c = 0; c < num_classes; ++c) {
      record.probabilities(c) = rng.uniform() + 1e-3;
    }
    record.probabilities /= record.probabilities.sum();
  }
  return records;
}

/// Random symmetric nonnegative matrix with zero diagonal.
inline AnimosityMatrix random_animosity(Rng& rng, int num_classes) {
  Matrix m(num_classes, num_classes);
  for (int r = 0; r < num_classes; ++r) {
    for (int c = 0; c < num_classes; ++c) {
      m(r, c) = rng.uniform() * 10.0;
    }
  }
  AnimosityMatrix cm;
  cm.entries = m.transpose() + m;
  cm.entries.diagonal().setZero();
  return cm;
}

/// Block-diagonal animosity matrix: blocks[i] classes are mutually connected
/// with values[i], cross-block entries zero, diagonal zero. Classes are
/// numbered consecutively in block order.
inline AnimosityMatrix block_animosity(const std::vector<int>& block_sizes,
                                       const std::vector<double>& values) {
  int c = 0;
  for (int size : block_sizes) c += size;
  AnimosityMatrix cm;
  cm.entries = Matrix::Zero(c, c);
  int start = 0;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    for (int i = start; i < start + block_sizes[b]; ++i) {
      for (int j = start; j < start + block_sizes[b]; ++j) {
        if (i != j) cm.entries(i, j) = values[b];
      }
    }
    start += block_sizes[b];
  }
  return cm;
}

/// Expected clusters of a block matrix, in block order, members ascending.
inline std::vector<std::vector<int>> block_clusters(
    const std::vector<int>& block_sizes) {
  std::vector<std::vector<int>> clusters;
  int start = 0;
  for (int size : block_sizes) {
    std::vector<int> members(size);
    for (int i = 0; i < size; ++i) members[i] = start + i;
    clusters.push_back(std::move(members));
    start += size;
  }
  return clusters;
}

/// Partition (or cover) as a set of sets, ignoring cluster order.
inline std::vector<std::vector<int>> sorted_clusters(
    std::vector<std::vector<int>> clusters) {
  std::sort(clusters.begin(), clusters.end());
  return clusters;
}

/// Bitwise matrix equality (Eigen's operator== is coefficient-wise).
inline bool exactly_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

inline bool exactly_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

}  // namespace specialists::testing
