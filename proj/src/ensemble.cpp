#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "specialists/ensemble.hpp"

namespace specialists {

std::string to_string(Gating gating) {
  return gating == Gating::all_specialists ? "all_specialists" : "generalist_topk";
}

Gating gating_from_string(const std::string& name) {
  if (name == "all_specialists") return Gating::all_specialists;
  if (name == "generalist_topk") return Gating::generalist_topk;
  throw std::invalid_argument("unknown gating: " + name);
}

void EnsembleConfig::validate(int num_classes) const {
  if (specialist_weight < 0.0) {
    throw std::invalid_argument("specialist weight must be nonnegative");
  }
  if (gating == Gating::generalist_topk &&
      (top_k < 1 || top_k > num_classes)) {
    throw std::invalid_argument("top_k must be in [1, num_classes]");
  }
}

std::vector<int> active_specialists(const Eigen::Ref<const Vector>& generalist_probs,
                                    const Clustering& clustering,
                                    const EnsembleConfig& config) {
  const int num_clusters = static_cast<int>(clustering.clusters.size());
  std::vector<int> active;
  if (config.gating == Gating::all_specialists) {
    active.resize(num_clusters);
    std::iota(active.begin(), active.end(), 0);
    return active;
  }

  config.validate(static_cast<int>(generalist_probs.size()));
  std::vector<int> order(generalist_probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return generalist_probs(a) > generalist_probs(b);
  });
  std::vector<char> in_top(order.size(), 0);
  for (int i = 0; i < config.top_k; ++i) in_top[order[i]] = 1;

  for (int k = 0; k < num_clusters; ++k) {
    const auto& members = clustering.clusters[k];
    if (std::any_of(members.begin(), members.end(),
                    [&](int cls) { return in_top[cls]; })) {
      active.push_back(k);
    }
  }
  return active;
}

Vector weighted_mean(std::span<const Vector> distributions,
                     std::span<const double> weights) {
  if (distributions.empty() || distributions.size() != weights.size()) {
    throw std::invalid_argument("empty ensemble");
  }
  double total = 0.0;
  Vector mean = Vector::Zero(distributions.front().size());
  for (std::size_t i = 0; i < distributions.size(); ++i) {
    if (distributions[i].size() != mean.size()) {
      throw std::invalid_argument("distribution length mismatch");
    }
    if (weights[i] < 0.0) {
      throw std::invalid_argument("negative ensemble weight");
    }
    mean += weights[i] * distributions[i];
    total += weights[i];
  }
  if (total <= 0.0) {
    throw std::invalid_argument("empty ensemble");
  }
  mean /= total;
  // The weighted mean of distributions is already a distribution; this only
  // absorbs floating error.
  const double sum = mean.sum();
  if (sum > 0.0) mean /= sum;
  return mean;
}

Vector combine(const Eigen::Ref<const Vector>& generalist_probs,
               const std::vector<Vector>& specialist_outputs,
               std::span<const int> active, const EnsembleConfig& config) {
  config.validate(static_cast<int>(generalist_probs.size()));
  std::vector<Vector> distributions;
  std::vector<double> weights;
  if (config.include_generalist) {
    distributions.emplace_back(generalist_probs);
    weights.push_back(1.0);
  }
  for (int k : active) {
    if (k < 0 || k >= static_cast<int>(specialist_outputs.size())) {
      throw std::invalid_argument("active cluster index out of range");
    }
    distributions.push_back(specialist_outputs[k]);
    weights.push_back(config.specialist_weight);
  }
  return weighted_mean(distributions, weights);
}

double evaluate(std::span<const PredictionRecord> generalist_records,
                const std::vector<std::vector<PredictionRecord>>& specialist_records,
                const Clustering& clustering, const EnsembleConfig& config) {
  if (generalist_records.empty()) {
    throw std::invalid_argument("empty test set");
  }
  if (specialist_records.size() != clustering.clusters.size()) {
    throw std::invalid_argument("one specialist log required per cluster");
  }
  for (const auto& log : specialist_records) {
    if (log.size() != generalist_records.size()) {
      throw std::invalid_argument("prediction log length mismatch");
    }
  }

  const std::size_t n = generalist_records.size();
  std::size_t correct = 0;
  std::vector<Vector> outputs(specialist_records.size());
  for (std::size_t i = 0; i < n; ++i) {
    const PredictionRecord& gen = generalist_records[i];
    for (std::size_t k = 0; k < specialist_records.size(); ++k) {
      if (specialist_records[k][i].true_label != gen.true_label) {
        throw std::invalid_argument("true-label mismatch between prediction logs");
      }
      outputs[k] = specialist_records[k][i].probabilities;
    }
    const std::vector<int> active =
        active_specialists(gen.probabilities, clustering, config);
    const Vector combined = combine(gen.probabilities, outputs, active, config);
    if (argmax_lowest(combined) == gen.true_label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

}  // namespace specialists
