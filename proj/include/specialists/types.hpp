#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specialists {

/// Structurally valid request that no algorithm run can satisfy, e.g. more
/// greedy clusters than the class count supports. Kept apart from plain
/// validation failures so callers can report it distinctly.
class InfeasibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// How held-out predictions are accumulated into a confusion matrix.
enum class Variant { standard, softsum, softsum_pred, softsum_not_pred };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& tag);
const std::vector<Variant>& all_variants();

/// Class-assignment algorithms operating on an animosity matrix.
enum class Algorithm { spectral, greedy_single, kmeans, greedy_pairs };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& tag);
const std::vector<Algorithm>& all_algorithms();

/// One held-out example: its true label and the model's full probability
/// vector over all classes.
struct PredictionRecord {
  int true_label = 0;
  Vector probabilities;
};

/// C x C accumulation of held-out predictions. Rows index true classes,
/// columns index predicted classes.
struct ConfusionMatrix {
  Matrix entries;
  Variant variant = Variant::standard;

  Eigen::Index num_classes() const { return entries.rows(); }
};

/// Symmetrized confusion matrix CM = A^T + A. Entry (a, b) is the animosity
/// score of classes a and b. The diagonal is retained; clustering algorithms
/// ignore it explicitly.
struct AnimosityMatrix {
  Matrix entries;

  Eigen::Index num_classes() const { return entries.rows(); }
};

/// Class-to-cluster assignment. Clusters are kept in creation order with
/// members sorted ascending. Non-overlapping clusterings are partitions of
/// {0, ..., num_classes - 1}; overlapping ones still cover every class.
struct Clustering {
  std::vector<std::vector<int>> clusters;
  int num_classes = 0;
  bool overlapping = false;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
};

/// Index of the largest coefficient; ties break toward the lowest index.
int argmax_lowest(const Eigen::Ref<const Vector>& v);

}  // namespace specialists
