#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "specialists/clustering.hpp"

namespace specialists {

SpectralEmbedding spectral_embedding(const AnimosityMatrix& cm, int num_clusters) {
  const Eigen::Index c = cm.num_classes();
  if (num_clusters < 1) {
    throw std::invalid_argument("cluster count must be positive");
  }
  if (num_clusters > c) {
    throw InfeasibleError("more clusters than classes");
  }

  Matrix affinity = cm.entries;
  affinity.diagonal().setZero();

  // Symmetric normalization D^{-1/2} W D^{-1/2}; isolated rows stay zero.
  Vector degree = affinity.rowwise().sum();
  Vector inv_sqrt(c);
  for (Eigen::Index i = 0; i < c; ++i) {
    inv_sqrt(i) = degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
  }
  Matrix normalized = inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(normalized);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failure");
  }

  SpectralEmbedding result;
  result.normalized_affinity = std::move(normalized);
  // Solver orders eigenvalues ascending; take the top num_clusters, descending.
  result.eigenvalues.resize(num_clusters);
  result.eigenvectors.resize(c, num_clusters);
  for (int j = 0; j < num_clusters; ++j) {
    const Eigen::Index src = c - 1 - j;
    result.eigenvalues(j) = solver.eigenvalues()(src);
    result.eigenvectors.col(j) = solver.eigenvectors().col(src);
  }

  // Rows normalized to unit length; zero rows are left as-is.
  result.embedding = result.eigenvectors;
  for (Eigen::Index i = 0; i < c; ++i) {
    const double norm = result.embedding.row(i).norm();
    if (norm > 0.0) result.embedding.row(i) /= norm;
  }
  return result;
}

Clustering spectral_clusters(const AnimosityMatrix& cm, int num_clusters,
                             std::uint64_t seed, const KMeansOptions& opts) {
  const int c = static_cast<int>(cm.num_classes());
  const SpectralEmbedding embedding = spectral_embedding(cm, num_clusters);
  const std::vector<int> labels =
      kmeans_rows(embedding.embedding, num_clusters, seed, opts);

  Clustering result;
  result.num_classes = c;
  result.overlapping = false;
  result.algorithm = to_string(Algorithm::spectral);
  result.seed = seed;
  result.clusters.assign(num_clusters, {});
  for (int i = 0; i < c; ++i) {
    result.clusters[labels[i]].push_back(i);
  }
  return result;
}

}  // namespace specialists
