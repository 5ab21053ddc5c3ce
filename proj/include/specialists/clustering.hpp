#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "specialists/types.hpp"

namespace specialists {

struct GreedyOptions {
  /// Send each popped pair (or class) to the cluster with minimal summed
  /// animosity instead of maximal. Off by default: classes that are hard to
  /// tell apart belong together, so the receiving cluster is the one they
  /// are most confused with.
  bool argmin_cluster_choice = false;
};

/// Greedily selects `num_clusters` disjoint unordered pairs (a, b), a < b, in
/// descending CM(a, b) order; both classes of each pair must be untouched by
/// earlier selections. Ties break toward the lexicographically smallest pair.
/// Each pair seeds one cluster. Requires C >= 2 * num_clusters.
std::vector<std::pair<int, int>> init_pairs(const AnimosityMatrix& cm,
                                            int num_clusters);

/// Overlapping greedy clustering. Seeds clusters with init_pairs, then pops
/// the remaining pairs in descending animosity order; each popped pair joins
/// the cluster with the largest animosity(a, c) + animosity(b, c) (lowest
/// cluster index on ties). Pairs whose classes are already assigned still
/// join, which is what produces overlap. Stops once every class is assigned.
Clustering greedy_pairs(const AnimosityMatrix& cm, int num_clusters,
                        const GreedyOptions& opts = {});

/// Partitioning greedy clustering. Seeds clusters with init_pairs, then
/// repeatedly assigns the unassigned class with the largest total animosity
/// toward the already-assigned classes to the cluster with the largest mean
/// animosity toward it. Ties break toward the lowest class / cluster index.
Clustering greedy_single(const AnimosityMatrix& cm, int num_clusters,
                         const GreedyOptions& opts = {});

struct KMeansOptions {
  int max_iterations = 300;
  int restarts = 10;  // best inertia wins; ties keep the earliest restart
};

/// Lloyd's k-means over arbitrary feature rows with k-means++ initialization.
/// Empty clusters are repaired by stealing the point farthest from its
/// centroid. Returns per-row cluster labels in [0, num_clusters).
std::vector<int> kmeans_rows(const Eigen::Ref<const Matrix>& points,
                             int num_clusters, std::uint64_t seed,
                             const KMeansOptions& opts = {});

/// k-means over the rows of CM (diagonal zeroed) as class features.
Clustering kmeans_clusters(const AnimosityMatrix& cm, int num_clusters,
                           std::uint64_t seed, const KMeansOptions& opts = {});

/// Intermediate state of the normalized spectral embedding, exposed so the
/// eigenpairs can be checked independently.
struct SpectralEmbedding {
  Matrix normalized_affinity;  // L = D^{-1/2} W D^{-1/2}, zero diagonal W
  Vector eigenvalues;          // the num_clusters largest, descending
  Matrix eigenvectors;         // columns matching eigenvalues
  Matrix embedding;            // rows normalized to unit length (zero rows kept)
};

SpectralEmbedding spectral_embedding(const AnimosityMatrix& cm,
                                     int num_clusters);

/// Ng-Jordan-Weiss spectral clustering: k-means on the rows of the
/// row-normalized top eigenvectors of D^{-1/2} W D^{-1/2}.
Clustering spectral_clusters(const AnimosityMatrix& cm, int num_clusters,
                             std::uint64_t seed,
                             const KMeansOptions& opts = {});

/// Dispatch on the algorithm tag. The seed is ignored by the deterministic
/// greedy algorithms and `opts` only affects them.
Clustering cluster_classes(Algorithm algorithm, const AnimosityMatrix& cm,
                           int num_clusters, std::uint64_t seed,
                           const GreedyOptions& opts = {});

}  // namespace specialists
