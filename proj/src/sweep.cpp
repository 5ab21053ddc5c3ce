#include <algorithm>
#include <atomic>
#include <cstdio>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "specialists/clustering.hpp"
#include "specialists/confusion.hpp"
#include "specialists/rng.hpp"
#include "specialists/sweep.hpp"

namespace specialists {

namespace {

constexpr std::uint64_t kDatasetStream = 0x64617461;
constexpr std::uint64_t kGeneralistStream = 0x67656e65;
constexpr std::uint64_t kClusteringStream = 0x636c7573;
constexpr std::uint64_t kSpecialistStream = 0x73706563;

/// Specialist seeds depend on the cluster content only, so identical clusters
/// reached through different algorithms or variants train identically. That
/// also makes the cache below a pure optimization.
std::uint64_t specialist_seed(std::uint64_t base, const std::vector<int>& members) {
  std::uint64_t h = derive_seed(base, kSpecialistStream);
  for (int cls : members) {
    h = derive_seed(h, static_cast<std::uint64_t>(cls) + 1);
  }
  return h;
}

std::uint64_t cell_seed(std::uint64_t base, Algorithm algorithm, Variant variant,
                        int num_clusters) {
  std::uint64_t h = derive_seed(base, kClusteringStream);
  h = derive_seed(h, static_cast<std::uint64_t>(algorithm));
  h = derive_seed(h, static_cast<std::uint64_t>(variant));
  return derive_seed(h, static_cast<std::uint64_t>(num_clusters));
}

using TestLog = std::shared_ptr<const std::vector<PredictionRecord>>;

/// Thread-safe memo of test-split prediction logs keyed by cluster members.
/// The first requester trains; everyone else waits on the shared future.
class SpecialistCache {
 public:
  SpecialistCache(const SyntheticDataset& dataset, const LinearClassifier& generalist,
                  const SpecialistOptions& opts, std::uint64_t seed_base)
      : dataset_(dataset), generalist_(generalist), opts_(opts), seed_base_(seed_base) {}

  TestLog get(const std::vector<int>& members) {
    std::promise<TestLog> promise;
    std::shared_future<TestLog> future;
    bool owner = false;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto [it, inserted] = futures_.try_emplace(members);
      if (inserted) {
        it->second = promise.get_future().share();
        owner = true;
      }
      future = it->second;
    }
    if (owner) {
      try {
        const LinearClassifier specialist =
            train_specialist(generalist_, dataset_, members, opts_,
                             specialist_seed(seed_base_, members));
        promise.set_value(std::make_shared<const std::vector<PredictionRecord>>(
            predict_records(specialist, dataset_, dataset_.test_indices)));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  }

 private:
  const SyntheticDataset& dataset_;
  const LinearClassifier& generalist_;
  const SpecialistOptions& opts_;
  std::uint64_t seed_base_;
  std::mutex mutex_;
  std::map<std::vector<int>, std::shared_future<TestLog>> futures_;
};

std::string format_cell(double accuracy, int num_clusters) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "(%.4f, %d)", accuracy, num_clusters);
  return buffer;
}

}  // namespace

int SweepConfig::num_classes() const {
  int total = 0;
  for (const ConfusabilityGroup& group : groups) {
    total += static_cast<int>(group.classes.size());
  }
  return total;
}

void SweepConfig::validate() const {
  const int c = num_classes();
  if (groups.empty() || c < 2) {
    throw std::invalid_argument("config needs at least two classes");
  }
  std::vector<char> seen(static_cast<std::size_t>(c), 0);
  for (const ConfusabilityGroup& group : groups) {
    for (int cls : group.classes) {
      if (cls < 0 || cls >= c || seen[cls]) {
        throw std::invalid_argument("groups must partition classes 0.." +
                                    std::to_string(c - 1));
      }
      seen[cls] = 1;
    }
  }
  if (algorithms.empty() || variants.empty() || cluster_counts.empty()) {
    throw std::invalid_argument("empty sweep grid");
  }
  // Counts above num_classes stay legal here; they surface per cell as
  // infeasible so the rest of the grid still runs.
  for (int n : cluster_counts) {
    if (n < 1) {
      throw std::invalid_argument("cluster counts must be positive");
    }
  }
  if (generalist_training.epochs < 0 || generalist_training.learning_rate <= 0.0 ||
      specialist_training.train.epochs < 0 ||
      specialist_training.train.learning_rate <= 0.0) {
    throw std::invalid_argument("bad training hyperparameters");
  }
  if (specialist_training.lambda_in < 0.0 || specialist_training.lambda_out < 0.0) {
    throw std::invalid_argument("loss weights must be nonnegative");
  }
  ensemble.validate(c);
}

SweepConfig default_sweep_config() {
  SweepConfig config;
  config.seed = 1;
  // One confusable mass: every class pair shares appreciable confusion, so
  // the partition choice (not the matrix variant) decides ensemble damage.
  config.groups = {
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19},
       0.70},
  };
  config.num_samples = 14400;
  config.dims = 16;
  // Train the generalist to its plateau; an undertrained baseline turns the
  // confusion matrix into routing noise that rewards degenerate partitions.
  config.generalist_training = {400, 0.05};
  // lambda_out 0 makes specialists blind outside their cluster, so gating a
  // wrong specialist costs accuracy and partition quality becomes visible.
  config.specialist_training = {1.0, 0.0, {25, 0.01}};
  config.ensemble.specialist_weight = 2.0;
  config.ensemble.include_generalist = true;
  config.ensemble.gating = Gating::generalist_topk;
  config.ensemble.top_k = 3;
  config.algorithms = {Algorithm::spectral, Algorithm::greedy_single,
                       Algorithm::kmeans, Algorithm::greedy_pairs};
  config.variants = {Variant::standard, Variant::softsum, Variant::softsum_pred,
                     Variant::softsum_not_pred};
  config.cluster_counts = {2, 3, 4, 5, 6};
  return config;
}

SweepConfig sweep_config_from_json(const nlohmann::json& value) {
  const SweepConfig defaults = default_sweep_config();
  SweepConfig config;
  try {
    config.seed = value.value("seed", defaults.seed);
    if (value.contains("dataset")) {
      const auto& dataset = value.at("dataset");
      config.num_samples = dataset.value("num_samples", defaults.num_samples);
      config.dims = dataset.value("dims", defaults.dims);
      if (dataset.contains("groups")) {
        config.groups.clear();
        for (const auto& group : dataset.at("groups")) {
          ConfusabilityGroup g;
          g.classes = group.at("classes").get<std::vector<int>>();
          g.overlap = group.at("overlap").get<double>();
          config.groups.push_back(std::move(g));
        }
      } else {
        config.groups = defaults.groups;
      }
    } else {
      config.groups = defaults.groups;
    }

    config.generalist_training = defaults.generalist_training;
    if (value.contains("generalist")) {
      const auto& t = value.at("generalist");
      config.generalist_training.epochs =
          t.value("epochs", defaults.generalist_training.epochs);
      config.generalist_training.learning_rate =
          t.value("learning_rate", defaults.generalist_training.learning_rate);
    }
    config.specialist_training = defaults.specialist_training;
    if (value.contains("specialist")) {
      const auto& t = value.at("specialist");
      config.specialist_training.train.epochs =
          t.value("epochs", defaults.specialist_training.train.epochs);
      config.specialist_training.train.learning_rate = t.value(
          "learning_rate", defaults.specialist_training.train.learning_rate);
      config.specialist_training.lambda_in =
          t.value("lambda_in", defaults.specialist_training.lambda_in);
      config.specialist_training.lambda_out =
          t.value("lambda_out", defaults.specialist_training.lambda_out);
    }
    config.ensemble = defaults.ensemble;
    if (value.contains("ensemble")) {
      const auto& e = value.at("ensemble");
      config.ensemble.specialist_weight =
          e.value("specialist_weight", defaults.ensemble.specialist_weight);
      config.ensemble.include_generalist =
          e.value("include_generalist", defaults.ensemble.include_generalist);
      if (e.contains("gating")) {
        config.ensemble.gating = gating_from_string(e.at("gating").get<std::string>());
      }
      config.ensemble.top_k = e.value("top_k", defaults.ensemble.top_k);
    }

    config.algorithms = defaults.algorithms;
    if (value.contains("algorithms")) {
      config.algorithms.clear();
      for (const auto& name : value.at("algorithms")) {
        config.algorithms.push_back(algorithm_from_string(name.get<std::string>()));
      }
    }
    config.variants = defaults.variants;
    if (value.contains("variants")) {
      config.variants.clear();
      for (const auto& name : value.at("variants")) {
        config.variants.push_back(variant_from_string(name.get<std::string>()));
      }
    }
    config.cluster_counts =
        value.value("cluster_counts", defaults.cluster_counts);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed sweep config: ") + e.what());
  }
  config.validate();
  return config;
}

nlohmann::ordered_json sweep_config_to_json(const SweepConfig& config) {
  nlohmann::ordered_json value;
  value["seed"] = config.seed;
  nlohmann::ordered_json dataset;
  dataset["num_samples"] = config.num_samples;
  dataset["dims"] = config.dims;
  dataset["groups"] = nlohmann::ordered_json::array();
  for (const ConfusabilityGroup& group : config.groups) {
    nlohmann::ordered_json g;
    g["classes"] = group.classes;
    g["overlap"] = group.overlap;
    dataset["groups"].push_back(std::move(g));
  }
  value["dataset"] = std::move(dataset);
  value["generalist"] = {{"epochs", config.generalist_training.epochs},
                         {"learning_rate", config.generalist_training.learning_rate}};
  value["specialist"] = {
      {"epochs", config.specialist_training.train.epochs},
      {"learning_rate", config.specialist_training.train.learning_rate},
      {"lambda_in", config.specialist_training.lambda_in},
      {"lambda_out", config.specialist_training.lambda_out}};
  value["ensemble"] = {{"specialist_weight", config.ensemble.specialist_weight},
                       {"include_generalist", config.ensemble.include_generalist},
                       {"gating", to_string(config.ensemble.gating)},
                       {"top_k", config.ensemble.top_k}};
  nlohmann::ordered_json algorithms = nlohmann::ordered_json::array();
  for (Algorithm a : config.algorithms) algorithms.push_back(to_string(a));
  value["algorithms"] = std::move(algorithms);
  nlohmann::ordered_json variants = nlohmann::ordered_json::array();
  for (Variant v : config.variants) variants.push_back(to_string(v));
  value["variants"] = std::move(variants);
  value["cluster_counts"] = config.cluster_counts;
  return value;
}

bool ExperimentReport::all_cells_failed() const {
  return !cells.empty() &&
         std::all_of(cells.begin(), cells.end(),
                     [](const SweepCell& cell) { return cell.failed; });
}

ExperimentReport run_sweep(const SyntheticDataset& dataset, const SweepConfig& config,
                           int jobs) {
  config.validate();
  if (dataset.num_classes != config.num_classes()) {
    throw std::invalid_argument("dataset class count disagrees with config");
  }
  const int c = dataset.num_classes;

  LinearClassifier generalist =
      train_generalist(dataset, config.generalist_training,
                       derive_seed(config.seed, kGeneralistStream));
  const std::vector<PredictionRecord> validation_records =
      predict_records(generalist, dataset, dataset.validation_indices);
  const std::vector<PredictionRecord> test_records =
      predict_records(generalist, dataset, dataset.test_indices);

  ExperimentReport report;
  report.cluster_counts = config.cluster_counts;
  report.generalist_accuracy = accuracy(generalist, dataset, dataset.test_indices);

  // The confusion input is always the validation split; clustering never sees
  // train or test predictions.
  std::map<Variant, AnimosityMatrix> animosity;
  for (Variant variant : config.variants) {
    if (animosity.count(variant)) continue;
    animosity.emplace(variant,
                      symmetrize(build_confusion(validation_records, c, variant)));
  }

  SpecialistCache cache(dataset, generalist, config.specialist_training, config.seed);

  report.cells.resize(config.algorithms.size() * config.variants.size());
  const auto run_cell = [&](std::size_t index) {
    SweepCell& cell = report.cells[index];
    cell.algorithm = config.algorithms[index / config.variants.size()];
    cell.variant = config.variants[index % config.variants.size()];
    try {
      const AnimosityMatrix& cm = animosity.at(cell.variant);
      for (int n : config.cluster_counts) {
        const Clustering clustering =
            cluster_classes(cell.algorithm, cm, n,
                            cell_seed(config.seed, cell.algorithm, cell.variant, n));
        std::vector<std::vector<PredictionRecord>> specialist_logs;
        specialist_logs.reserve(clustering.clusters.size());
        for (const std::vector<int>& members : clustering.clusters) {
          specialist_logs.push_back(*cache.get(members));
        }
        const double acc =
            evaluate(test_records, specialist_logs, clustering, config.ensemble);
        cell.curve.emplace_back(n, acc);
        if (cell.curve.size() == 1 || acc > cell.best_accuracy) {
          cell.best_accuracy = acc;
          cell.best_num_clusters = n;
        }
      }
    } catch (const std::exception& e) {
      cell = SweepCell{};
      cell.algorithm = config.algorithms[index / config.variants.size()];
      cell.variant = config.variants[index % config.variants.size()];
      cell.failed = true;
      cell.error = e.what();
    }
  };

  const int workers = std::max(1, jobs);
  if (workers == 1) {
    for (std::size_t i = 0; i < report.cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < report.cells.size(); i = next++) {
          run_cell(i);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return report;
}

ExperimentReport run_sweep(const SweepConfig& config, int jobs) {
  config.validate();
  const SyntheticDataset dataset =
      generate_dataset(config.groups, config.num_samples, config.dims,
                       derive_seed(config.seed, kDatasetStream));
  return run_sweep(dataset, config, jobs);
}

nlohmann::ordered_json report_to_json(const ExperimentReport& report,
                                      const SweepConfig& config) {
  nlohmann::ordered_json value;
  value["generalist_accuracy"] = report.generalist_accuracy;
  value["cluster_counts"] = report.cluster_counts;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const SweepCell& cell : report.cells) {
    nlohmann::ordered_json entry;
    entry["algorithm"] = to_string(cell.algorithm);
    entry["variant"] = to_string(cell.variant);
    entry["failed"] = cell.failed;
    if (cell.failed) {
      entry["error"] = cell.error;
    } else {
      entry["best_accuracy"] = cell.best_accuracy;
      entry["best_num_clusters"] = cell.best_num_clusters;
      nlohmann::ordered_json curve = nlohmann::ordered_json::array();
      for (const auto& [n, acc] : cell.curve) {
        curve.push_back({{"num_clusters", n}, {"accuracy", acc}});
      }
      entry["curve"] = std::move(curve);
    }
    cells.push_back(std::move(entry));
  }
  value["cells"] = std::move(cells);
  value["config"] = sweep_config_to_json(config);
  return value;
}

std::string display_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::spectral: return "spectral";
    case Algorithm::greedy_single: return "greedy singles";
    case Algorithm::kmeans: return "kmeans";
    case Algorithm::greedy_pairs: return "greedy pairs";
  }
  return "?";
}

std::string display_name(Variant variant) {
  switch (variant) {
    case Variant::standard: return "standard";
    case Variant::softsum: return "soft sum";
    case Variant::softsum_pred: return "soft sum pred";
    case Variant::softsum_not_pred: return "soft sum not pred";
  }
  return "?";
}

std::string report_table(const ExperimentReport& report, const SweepConfig& config) {
  const std::size_t num_variants = config.variants.size();
  std::vector<std::vector<std::string>> grid;
  grid.push_back({"Results"});
  for (Variant variant : config.variants) {
    grid.front().push_back(display_name(variant));
  }
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    std::vector<std::string> row{display_name(config.algorithms[a])};
    for (std::size_t v = 0; v < num_variants; ++v) {
      const SweepCell& cell = report.cells[a * num_variants + v];
      row.push_back(cell.failed
                        ? "(failed)"
                        : format_cell(cell.best_accuracy, cell.best_num_clusters));
    }
    grid.push_back(std::move(row));
  }

  std::vector<std::size_t> widths(num_variants + 1, 0);
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }

  std::ostringstream out;
  char baseline[40];
  std::snprintf(baseline, sizeof(baseline), "%.4f", report.generalist_accuracy);
  out << "generalist baseline: " << baseline << "\n\n";
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << " & ";
      out << row[i] << std::string(widths[i] - row[i].size(), ' ');
    }
    out << " \\\\\n";
  }
  return out.str();
}

}  // namespace specialists
