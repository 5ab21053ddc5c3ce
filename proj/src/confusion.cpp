#include "specialists/confusion.hpp"

#include <stdexcept>
#include <string>

namespace specialists {

namespace {

const char* variant_names[] = {"standard", "softsum", "softsum_pred",
                               "softsum_not_pred"};
const char* algorithm_names[] = {"spectral", "greedy_single", "kmeans",
                                 "greedy_pairs"};

}  // namespace

std::string to_string(Variant v) {
  return variant_names[static_cast<int>(v)];
}

Variant variant_from_string(const std::string& tag) {
  for (int i = 0; i < 4; ++i) {
    if (tag == variant_names[i]) return static_cast<Variant>(i);
  }
  throw std::invalid_argument("unknown confusion variant: " + tag);
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> variants = {
      Variant::standard, Variant::softsum, Variant::softsum_pred,
      Variant::softsum_not_pred};
  return variants;
}

std::string to_string(Algorithm a) {
  return algorithm_names[static_cast<int>(a)];
}

Algorithm algorithm_from_string(const std::string& tag) {
  for (int i = 0; i < 4; ++i) {
    if (tag == algorithm_names[i]) return static_cast<Algorithm>(i);
  }
  throw std::invalid_argument("unknown clustering algorithm: " + tag);
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> algorithms = {
      Algorithm::spectral, Algorithm::greedy_single, Algorithm::kmeans,
      Algorithm::greedy_pairs};
  return algorithms;
}

int argmax_lowest(const Eigen::Ref<const Vector>& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}

ConfusionMatrix build_confusion(std::span<const PredictionRecord> records,
                                int num_classes, Variant variant) {
  if (num_classes < 2) {
    throw std::invalid_argument("need at least 2 classes");
  }
  if (records.empty()) {
    throw std::invalid_argument("no predictions");
  }

  // Two conditional accumulators; softsum returns their sum so that the
  // softsum_pred / softsum_not_pred partition identity is exact.
  Matrix pred = Matrix::Zero(num_classes, num_classes);
  Matrix not_pred = Matrix::Zero(num_classes, num_classes);
  Matrix standard = Matrix::Zero(num_classes, num_classes);

  for (std::size_t i = 0; i < records.size(); ++i) {
    const PredictionRecord& rec = records[i];
    if (rec.true_label < 0 || rec.true_label >= num_classes) {
      throw std::invalid_argument("record " + std::to_string(i) +
                                  ": label out of range: " +
                                  std::to_string(rec.true_label));
    }
    if (rec.probabilities.size() != num_classes) {
      throw std::invalid_argument(
          "record " + std::to_string(i) + ": probability vector has length " +
          std::to_string(rec.probabilities.size()) + ", expected " +
          std::to_string(num_classes));
    }
    const int predicted = argmax_lowest(rec.probabilities);
    if (variant == Variant::standard) {
      standard(rec.true_label, predicted) += 1.0;
    } else {
      Matrix& target = (predicted == rec.true_label) ? pred : not_pred;
      target.row(rec.true_label) += rec.probabilities.transpose();
    }
  }

  ConfusionMatrix result;
  result.variant = variant;
  switch (variant) {
    case Variant::standard:
      result.entries = std::move(standard);
      break;
    case Variant::softsum:
      result.entries = pred + not_pred;
      break;
    case Variant::softsum_pred:
      result.entries = std::move(pred);
      break;
    case Variant::softsum_not_pred:
      result.entries = std::move(not_pred);
      break;
  }
  return result;
}

AnimosityMatrix symmetrize(const ConfusionMatrix& a) {
  return symmetrize(a.entries);
}

AnimosityMatrix symmetrize(const Eigen::Ref<const Matrix>& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("confusion matrix must be square");
  }
  AnimosityMatrix cm;
  cm.entries = a.transpose() + a;
  return cm;
}

double animosity(const AnimosityMatrix& cm, int cls,
                 std::span<const int> cluster) {
  if (cluster.empty()) {
    throw std::invalid_argument("empty cluster");
  }
  const int c = static_cast<int>(cm.num_classes());
  if (cls < 0 || cls >= c) {
    throw std::invalid_argument("class index out of range");
  }
  double sum = 0.0;
  int count = 0;
  for (int member : cluster) {
    if (member < 0 || member >= c) {
      throw std::invalid_argument("cluster member out of range");
    }
    if (member == cls) continue;  // self-confusion is not inter-class animosity
    sum += cm.entries(cls, member);
    ++count;
  }
  return count == 0 ? 0.0 : sum / count;
}

}  // namespace specialists
