#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "specialists/clustering.hpp"
#include "specialists/rng.hpp"

namespace specialists {

namespace {

/// Squared distances from every point to one centroid.
Vector squared_distances(const Eigen::Ref<const Matrix>& points,
                         const Eigen::Ref<const Vector>& centroid) {
  return (points.rowwise() - centroid.transpose()).rowwise().squaredNorm();
}

/// k-means++ seeding: first centroid uniform, each further centroid sampled
/// with probability proportional to its squared distance from the nearest
/// chosen centroid.
Matrix plus_plus_init(const Eigen::Ref<const Matrix>& points, int k, Rng& rng) {
  const Eigen::Index n = points.rows();
  Matrix centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.index(n)));
  Vector min_dist = squared_distances(points, centroids.row(0).transpose());
  for (int j = 1; j < k; ++j) {
    const double total = min_dist.sum();
    Eigen::Index chosen;
    if (total <= 0.0) {
      chosen = static_cast<Eigen::Index>(rng.index(n));
    } else {
      const double u = rng.uniform() * total;
      double cumulative = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        cumulative += min_dist(i);
        if (u < cumulative) {
          chosen = i;
          break;
        }
      }
    }
    centroids.row(j) = points.row(chosen);
    min_dist =
        min_dist.cwiseMin(squared_distances(points, centroids.row(j).transpose()));
  }
  return centroids;
}

struct LloydResult {
  std::vector<int> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

LloydResult lloyd(const Eigen::Ref<const Matrix>& points, int k, Rng& rng,
                  int max_iterations) {
  const Eigen::Index n = points.rows();
  Matrix centroids = plus_plus_init(points, k, rng);
  std::vector<int> labels(n, -1);
  std::vector<int> sizes(k, 0);

  for (int iter = 0; iter < max_iterations; ++iter) {
    // Assignment; ties toward the lowest centroid index.
    bool changed = false;
    std::fill(sizes.begin(), sizes.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_dist = (points.row(i) - centroids.row(0)).squaredNorm();
      for (int j = 1; j < k; ++j) {
        const double d = (points.row(i) - centroids.row(j)).squaredNorm();
        if (d < best_dist) {
          best = j;
          best_dist = d;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
      ++sizes[best];
    }

    // Repair empty clusters by stealing the point farthest from its centroid
    // (clusters of one point are left alone so the repair cannot cascade).
    for (int j = 0; j < k; ++j) {
      if (sizes[j] > 0) continue;
      Eigen::Index victim = -1;
      double victim_dist = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (sizes[labels[i]] < 2) continue;
        const double d = (points.row(i) - centroids.row(labels[i])).squaredNorm();
        if (d > victim_dist) {
          victim = i;
          victim_dist = d;
        }
      }
      if (victim < 0) {
        throw std::invalid_argument("more clusters than points");
      }
      --sizes[labels[victim]];
      labels[victim] = j;
      ++sizes[j];
      changed = true;
    }

    if (!changed && iter > 0) break;

    // Centroid update.
    centroids.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      centroids.row(labels[i]) += points.row(i);
    }
    for (int j = 0; j < k; ++j) {
      centroids.row(j) /= static_cast<double>(sizes[j]);
    }
  }

  LloydResult result;
  result.labels = std::move(labels);
  result.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    result.inertia += (points.row(i) - centroids.row(result.labels[i])).squaredNorm();
  }
  return result;
}

}  // namespace

std::vector<int> kmeans_rows(const Eigen::Ref<const Matrix>& points,
                             int num_clusters, std::uint64_t seed,
                             const KMeansOptions& opts) {
  if (num_clusters < 1) {
    throw std::invalid_argument("cluster count must be positive");
  }
  if (points.rows() < num_clusters) {
    throw InfeasibleError("more clusters than points");
  }

  LloydResult best;
  for (int restart = 0; restart < opts.restarts; ++restart) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart)));
    LloydResult run = lloyd(points, num_clusters, rng, opts.max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best.labels;
}

Clustering kmeans_clusters(const AnimosityMatrix& cm, int num_clusters,
                           std::uint64_t seed, const KMeansOptions& opts) {
  const int c = static_cast<int>(cm.num_classes());
  if (num_clusters < 1) {
    throw std::invalid_argument("cluster count must be positive");
  }
  if (num_clusters > c) {
    throw InfeasibleError("more clusters than classes");
  }

  Matrix features = cm.entries;
  features.diagonal().setZero();

  const std::vector<int> labels = kmeans_rows(features, num_clusters, seed, opts);

  Clustering result;
  result.num_classes = c;
  result.overlapping = false;
  result.algorithm = to_string(Algorithm::kmeans);
  result.seed = seed;
  result.clusters.assign(num_clusters, {});
  for (int i = 0; i < c; ++i) {
    result.clusters[labels[i]].push_back(i);  // ascending by construction
  }
  return result;
}

}  // namespace specialists
