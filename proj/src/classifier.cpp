#include <cmath>
#include <stdexcept>

#include "specialists/classifier.hpp"
#include "specialists/rng.hpp"

namespace specialists {

namespace {

/// Stable softmax of logits, plus log-sum-exp for the loss.
Vector softmax(const Vector& logits, double* log_sum_exp = nullptr) {
  const double peak = logits.maxCoeff();
  Vector probs = (logits.array() - peak).exp();
  const double total = probs.sum();
  probs /= total;
  if (log_sum_exp) *log_sum_exp = peak + std::log(total);
  return probs;
}

}  // namespace

Vector LinearClassifier::probabilities(const Eigen::Ref<const Vector>& x) const {
  return softmax(weights * x + bias);
}

int LinearClassifier::predict(const Eigen::Ref<const Vector>& x) const {
  return argmax_lowest(probabilities(x));
}

std::vector<double> fine_tune(LinearClassifier& model, const SyntheticDataset& dataset,
                              std::span<const int> indices,
                              std::span<const double> example_weights,
                              const TrainOptions& opts, std::uint64_t seed) {
  if (indices.empty()) {
    throw std::invalid_argument("no training examples");
  }
  if (model.weights.rows() != dataset.num_classes ||
      model.weights.cols() != dataset.dims() ||
      model.bias.size() != dataset.num_classes) {
    throw std::invalid_argument("model shape disagrees with dataset");
  }
  if (example_weights.size() != static_cast<std::size_t>(dataset.num_samples())) {
    throw std::invalid_argument("one loss weight required per dataset row");
  }
  if (opts.epochs < 0 || opts.learning_rate <= 0.0) {
    throw std::invalid_argument("bad training hyperparameters");
  }

  Rng rng(mix_seed(seed));
  std::vector<int> order(indices.begin(), indices.end());
  std::vector<double> epoch_losses;
  epoch_losses.reserve(opts.epochs);

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (int row : order) {
      const Vector x = dataset.features.row(row).transpose();
      const int label = dataset.labels[row];
      const double weight = example_weights[row];

      double log_sum_exp = 0.0;
      const Vector logits = model.weights * x + model.bias;
      Vector grad = softmax(logits, &log_sum_exp);
      loss_sum += weight * (log_sum_exp - logits(label));

      grad(label) -= 1.0;
      const double step = opts.learning_rate * weight;
      model.weights.noalias() -= step * grad * x.transpose();
      model.bias -= step * grad;
    }
    const double epoch_loss = loss_sum / static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss)) {
      throw std::runtime_error("training diverged");
    }
    epoch_losses.push_back(epoch_loss);
  }
  return epoch_losses;
}

LinearClassifier train_generalist(const SyntheticDataset& dataset,
                                  const TrainOptions& opts, std::uint64_t seed,
                                  std::vector<double>* epoch_losses) {
  LinearClassifier model(dataset.num_classes, static_cast<int>(dataset.dims()));
  std::vector<double> weights(dataset.num_samples(), 1.0);
  std::vector<double> losses =
      fine_tune(model, dataset, dataset.train_indices, weights, opts, seed);
  if (epoch_losses) *epoch_losses = std::move(losses);
  return model;
}

LinearClassifier train_specialist(const LinearClassifier& generalist,
                                  const SyntheticDataset& dataset,
                                  std::span<const int> cluster,
                                  const SpecialistOptions& opts, std::uint64_t seed,
                                  std::vector<double>* epoch_losses) {
  if (cluster.empty()) {
    throw std::invalid_argument("empty cluster");
  }
  std::vector<char> in_cluster(dataset.num_classes, 0);
  for (int cls : cluster) {
    if (cls < 0 || cls >= dataset.num_classes) {
      throw std::invalid_argument("cluster class out of range");
    }
    in_cluster[cls] = 1;
  }

  LinearClassifier model = generalist;
  std::vector<double> weights(dataset.num_samples());
  for (Eigen::Index i = 0; i < dataset.num_samples(); ++i) {
    weights[i] = in_cluster[dataset.labels[i]] ? opts.lambda_in : opts.lambda_out;
  }
  std::vector<double> losses =
      fine_tune(model, dataset, dataset.train_indices, weights, opts.train, seed);
  if (epoch_losses) *epoch_losses = std::move(losses);
  return model;
}

std::vector<PredictionRecord> predict_records(const LinearClassifier& model,
                                              const SyntheticDataset& dataset,
                                              std::span<const int> indices) {
  std::vector<PredictionRecord> records;
  records.reserve(indices.size());
  for (int row : indices) {
    PredictionRecord record;
    record.true_label = dataset.labels[row];
    record.probabilities = model.probabilities(dataset.features.row(row).transpose());
    records.push_back(std::move(record));
  }
  return records;
}

double accuracy(const LinearClassifier& model, const SyntheticDataset& dataset,
                std::span<const int> indices) {
  if (indices.empty()) {
    throw std::invalid_argument("empty evaluation set");
  }
  std::size_t correct = 0;
  for (int row : indices) {
    if (model.predict(dataset.features.row(row).transpose()) == dataset.labels[row]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

}  // namespace specialists
