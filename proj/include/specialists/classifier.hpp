#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "specialists/dataset.hpp"
#include "specialists/types.hpp"

namespace specialists {

/// Multinomial logistic regression: probabilities = softmax(W x + b).
struct LinearClassifier {
  Matrix weights;  // C x d
  Vector bias;     // C

  LinearClassifier() = default;
  LinearClassifier(int num_classes, int dims)
      : weights(Matrix::Zero(num_classes, dims)), bias(Vector::Zero(num_classes)) {}

  int num_classes() const { return static_cast<int>(weights.rows()); }

  Vector probabilities(const Eigen::Ref<const Vector>& x) const;
  int predict(const Eigen::Ref<const Vector>& x) const;
};

struct TrainOptions {
  int epochs = 40;
  double learning_rate = 0.01;
};

struct SpecialistOptions {
  double lambda_in = 1.0;   // loss weight for examples whose label is in the cluster
  double lambda_out = 0.1;  // loss weight for everything else
  TrainOptions train;
};

/// In-place SGD on the weighted cross-entropy, one pass per epoch over
/// `indices` in a seed-derived shuffled order. `example_weights` is indexed
/// by dataset row. Returns the mean weighted loss per epoch and throws
/// "training diverged" if a loss goes non-finite.
std::vector<double> fine_tune(LinearClassifier& model, const SyntheticDataset& dataset,
                              std::span<const int> indices,
                              std::span<const double> example_weights,
                              const TrainOptions& opts, std::uint64_t seed);

/// Zero-initialized classifier trained on the train split with unit weights.
LinearClassifier train_generalist(const SyntheticDataset& dataset,
                                  const TrainOptions& opts, std::uint64_t seed,
                                  std::vector<double>* epoch_losses = nullptr);

/// Copy of the generalist fine-tuned on the train split with per-example loss
/// weight lambda_in inside the cluster and lambda_out outside. All classes
/// stay in the output layer.
LinearClassifier train_specialist(const LinearClassifier& generalist,
                                  const SyntheticDataset& dataset,
                                  std::span<const int> cluster,
                                  const SpecialistOptions& opts, std::uint64_t seed,
                                  std::vector<double>* epoch_losses = nullptr);

/// One PredictionRecord per index, in the given order.
std::vector<PredictionRecord> predict_records(const LinearClassifier& model,
                                              const SyntheticDataset& dataset,
                                              std::span<const int> indices);

double accuracy(const LinearClassifier& model, const SyntheticDataset& dataset,
                std::span<const int> indices);

}  // namespace specialists
