#pragma once

#include <span>

#include "specialists/types.hpp"

namespace specialists {

/// Accumulates a confusion matrix from held-out predictions. Rows index the
/// true class, columns the predicted class (argmax of the probability vector,
/// ties toward the lowest index). Per record with true label t and prediction
/// p:
///   standard         entries(t, p) += 1
///   softsum          entries.row(t) += probabilities
///   softsum_pred     as softsum, but only when p == t
///   softsum_not_pred as softsum, but only when p != t
///
/// softsum is accumulated as the sum of the two conditional accumulators, so
/// softsum_pred + softsum_not_pred == softsum holds exactly.
ConfusionMatrix build_confusion(std::span<const PredictionRecord> records,
                                int num_classes, Variant variant);

/// CM = A^T + A. The result is exactly symmetric.
AnimosityMatrix symmetrize(const ConfusionMatrix& a);
AnimosityMatrix symmetrize(const Eigen::Ref<const Matrix>& a);

/// Mean animosity between `cls` and the members of `cluster`. The self entry
/// CM(cls, cls) is excluded when cls is a member; a cluster containing only
/// `cls` itself has no inter-class animosity and scores 0.
double animosity(const AnimosityMatrix& cm, int cls,
                 std::span<const int> cluster);

}  // namespace specialists
