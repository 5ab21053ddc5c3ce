#pragma once

#include <span>
#include <vector>

#include "specialists/types.hpp"

namespace specialists {

enum class Gating { all_specialists, generalist_topk };

std::string to_string(Gating gating);
Gating gating_from_string(const std::string& name);

struct EnsembleConfig {
  double specialist_weight = 1.0;  // w >= 0, relative to the generalist's 1
  bool include_generalist = true;
  Gating gating = Gating::all_specialists;
  int top_k = 1;  // only read under generalist_topk

  /// Throws std::invalid_argument if w < 0 or top_k is outside [1, C].
  void validate(int num_classes) const;
};

/// Cluster indices whose specialists take part for one example, ascending.
/// all_specialists activates every cluster; generalist_topk activates the
/// clusters intersecting the generalist's top-k classes (probability ties
/// toward the lowest class index).
std::vector<int> active_specialists(const Eigen::Ref<const Vector>& generalist_probs,
                                    const Clustering& clustering,
                                    const EnsembleConfig& config);

/// Weighted arithmetic mean of probability vectors, renormalized to sum to 1.
/// Throws "empty ensemble" when there are no contributors or the total weight
/// is zero.
Vector weighted_mean(std::span<const Vector> distributions,
                     std::span<const double> weights);

/// Mean of the generalist (weight 1, if included) and the active specialists
/// (weight w each). specialist_outputs holds one length-C vector per cluster.
Vector combine(const Eigen::Ref<const Vector>& generalist_probs,
               const std::vector<Vector>& specialist_outputs,
               std::span<const int> active, const EnsembleConfig& config);

/// Argmax accuracy of the combined outputs over a test set. One prediction
/// log per model, all aligned record-for-record with identical true labels.
double evaluate(std::span<const PredictionRecord> generalist_records,
                const std::vector<std::vector<PredictionRecord>>& specialist_records,
                const Clustering& clustering, const EnsembleConfig& config);

}  // namespace specialists
