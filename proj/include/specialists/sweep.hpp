#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "specialists/classifier.hpp"
#include "specialists/dataset.hpp"
#include "specialists/ensemble.hpp"
#include "specialists/types.hpp"

namespace specialists {

struct SweepConfig {
  std::uint64_t seed = 1;
  std::vector<ConfusabilityGroup> groups;
  int num_samples = 14400;
  int dims = 16;
  TrainOptions generalist_training;
  SpecialistOptions specialist_training;
  EnsembleConfig ensemble;
  std::vector<Algorithm> algorithms;
  std::vector<Variant> variants;
  std::vector<int> cluster_counts;

  int num_classes() const;
  /// Structural checks that need no training; throws std::invalid_argument.
  void validate() const;
};

SweepConfig default_sweep_config();
SweepConfig sweep_config_from_json(const nlohmann::json& value);
nlohmann::ordered_json sweep_config_to_json(const SweepConfig& config);

/// One (algorithm, variant) grid cell. A failure at any cluster count aborts
/// the whole cell; the error text is kept and the sweep continues.
struct SweepCell {
  Algorithm algorithm = Algorithm::spectral;
  Variant variant = Variant::standard;
  bool failed = false;
  std::string error;
  double best_accuracy = 0.0;
  int best_num_clusters = 0;
  std::vector<std::pair<int, double>> curve;  // (cluster count, test accuracy)
};

struct ExperimentReport {
  double generalist_accuracy = 0.0;
  std::vector<int> cluster_counts;
  std::vector<SweepCell> cells;  // algorithm-major in config order

  bool all_cells_failed() const;
};

/// Full grid over algorithms x variants x cluster counts: confusion from the
/// generalist's validation predictions, clustering, one specialist per
/// cluster fine-tuned from the generalist, ensemble accuracy on the test
/// split. Cells may run on `jobs` threads; results are identical to jobs=1
/// because every seed is derived from coordinates or cluster content, never
/// from execution order.
ExperimentReport run_sweep(const SyntheticDataset& dataset, const SweepConfig& config,
                           int jobs = 1);

/// Generates the dataset described by the config, then sweeps.
ExperimentReport run_sweep(const SweepConfig& config, int jobs = 1);

nlohmann::ordered_json report_to_json(const ExperimentReport& report,
                                      const SweepConfig& config);

/// Aligned text table: rows = algorithms, columns = variants, cells
/// "(accuracy, best cluster count)" with four decimals.
std::string report_table(const ExperimentReport& report, const SweepConfig& config);

/// Row/column labels used by the text table.
std::string display_name(Algorithm algorithm);
std::string display_name(Variant variant);

}  // namespace specialists
