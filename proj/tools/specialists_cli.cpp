#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specialists/clustering.hpp"
#include "specialists/confusion.hpp"
#include "specialists/ensemble.hpp"
#include "specialists/io.hpp"
#include "specialists/sweep.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitAllCellsFailed = 4;

struct BuildConfusionArgs {
  std::string predictions;
  int classes = 0;
  std::string variant = "standard";
  std::string out;
};

struct SymmetrizeArgs {
  std::string matrix;
  std::string out;
};

struct ClusterArgs {
  std::string matrix;
  std::string algorithm;
  int n = 0;
  std::uint64_t seed = 0;
  bool argmin_variant = false;
  std::string out;
};

struct CombineEvalArgs {
  std::string generalist;
  std::vector<std::string> specialists;
  std::string clustering;
  double weight = 1.0;
  bool no_generalist = false;
  std::string gating = "all_specialists";
  int top_k = 1;
  std::string out;
};

struct SweepArgs {
  std::string config;
  std::string out_dir;
  int jobs = 1;
};

int run_build_confusion(const BuildConfusionArgs& args) {
  const auto records = specialists::io::read_prediction_log(
      std::filesystem::path(args.predictions));
  const specialists::Variant variant = specialists::variant_from_string(args.variant);
  const specialists::ConfusionMatrix confusion =
      specialists::build_confusion(records, args.classes, variant);
  specialists::io::write_matrix_csv(std::filesystem::path(args.out),
                                    confusion.entries, args.variant);
  std::cout << "records: " << records.size() << "\n"
            << "classes: " << args.classes << "\n"
            << "variant: " << args.variant << "\n"
            << "trace: " << specialists::io::format_double(confusion.entries.trace())
            << "\n";
  return 0;
}

int run_symmetrize(const SymmetrizeArgs& args) {
  const specialists::io::MatrixCsv input =
      specialists::io::read_matrix_csv(std::filesystem::path(args.matrix));
  const specialists::AnimosityMatrix cm = specialists::symmetrize(input.matrix);
  specialists::io::write_matrix_csv(std::filesystem::path(args.out), cm.entries,
                                    std::string("animosity"));
  std::cout << "classes: " << cm.num_classes() << "\n";
  return 0;
}

int run_cluster(const ClusterArgs& args) {
  if (args.n < 1) {
    std::cerr << "error: --n must be at least 1\n";
    return kExitValidation;
  }
  const specialists::Algorithm algorithm =
      specialists::algorithm_from_string(args.algorithm);
  const specialists::io::MatrixCsv input =
      specialists::io::read_matrix_csv(std::filesystem::path(args.matrix));
  if (input.matrix.rows() != input.matrix.cols()) {
    std::cerr << "error: matrix must be square\n";
    return kExitValidation;
  }

  specialists::AnimosityMatrix cm;
  if ((input.matrix.array() == input.matrix.transpose().array()).all()) {
    cm.entries = input.matrix;
  } else {
    cm = specialists::symmetrize(input.matrix);
    std::cerr << "note: input was not symmetric; clustered A^T + A instead\n";
  }

  specialists::GreedyOptions opts;
  opts.argmin_cluster_choice = args.argmin_variant;
  const specialists::Clustering clustering =
      specialists::cluster_classes(algorithm, cm, args.n, args.seed, opts);
  specialists::io::write_clustering(std::filesystem::path(args.out), clustering);
  std::cout << specialists::io::clustering_to_json(clustering).dump(2) << "\n";
  return 0;
}

int run_combine_eval(const CombineEvalArgs& args) {
  const specialists::Clustering clustering =
      specialists::io::read_clustering(std::filesystem::path(args.clustering));
  const auto generalist_records = specialists::io::read_prediction_log(
      std::filesystem::path(args.generalist));

  if (args.specialists.size() != clustering.clusters.size()) {
    std::cerr << "error: got " << args.specialists.size()
              << " specialist logs for " << clustering.clusters.size()
              << " clusters\n";
    return kExitValidation;
  }
  std::vector<std::vector<specialists::PredictionRecord>> specialist_records;
  specialist_records.reserve(args.specialists.size());
  for (const std::string& path : args.specialists) {
    specialist_records.push_back(
        specialists::io::read_prediction_log(std::filesystem::path(path)));
  }

  specialists::EnsembleConfig config;
  config.specialist_weight = args.weight;
  config.include_generalist = !args.no_generalist;
  config.gating = specialists::gating_from_string(args.gating);
  config.top_k = args.top_k;

  const double acc = specialists::evaluate(generalist_records, specialist_records,
                                           clustering, config);

  nlohmann::ordered_json result;
  result["algorithm"] = clustering.algorithm;
  result["variant"] = nullptr;
  result["num_clusters"] = clustering.clusters.size();
  result["accuracy"] = acc;
  result["config"] = {{"specialist_weight", config.specialist_weight},
                      {"include_generalist", config.include_generalist},
                      {"gating", specialists::to_string(config.gating)},
                      {"top_k", config.top_k}};
  const std::string text = result.dump(2) + "\n";
  if (!args.out.empty()) {
    specialists::io::write_text_file(std::filesystem::path(args.out), text);
  }
  std::cout << text;
  return 0;
}

int run_sweep_cmd(const SweepArgs& args) {
  nlohmann::json config_json;
  try {
    config_json = nlohmann::json::parse(
        specialists::io::read_text_file(std::filesystem::path(args.config)));
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << args.config << ": " << e.what() << "\n";
    return kExitValidation;
  }
  const specialists::SweepConfig config =
      specialists::sweep_config_from_json(config_json);
  if (args.jobs < 1) {
    std::cerr << "error: --jobs must be at least 1\n";
    return kExitValidation;
  }

  const specialists::ExperimentReport report =
      specialists::run_sweep(config, args.jobs);

  const std::filesystem::path out_dir(args.out_dir);
  std::filesystem::create_directories(out_dir);
  specialists::io::write_text_file(
      out_dir / "report.json",
      specialists::report_to_json(report, config).dump(2) + "\n");
  const std::string table = specialists::report_table(report, config);
  specialists::io::write_text_file(out_dir / "report.txt", table);
  std::cout << table;

  for (const specialists::SweepCell& cell : report.cells) {
    if (cell.failed) {
      std::cerr << "cell failed: " << specialists::to_string(cell.algorithm) << " / "
                << specialists::to_string(cell.variant) << ": " << cell.error << "\n";
    }
  }
  if (report.all_cells_failed()) {
    std::cerr << "error: every sweep cell failed\n";
    return kExitAllCellsFailed;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Confusion-driven class assignment: build confusion matrices from "
      "prediction logs, cluster classes by animosity, and evaluate "
      "generalist + specialist ensembles."};
  app.require_subcommand(1);

  BuildConfusionArgs build_args;
  CLI::App* build = app.add_subcommand(
      "build-confusion", "Accumulate a prediction log into a confusion matrix CSV.");
  build->add_option("--predictions", build_args.predictions, "Prediction log (JSONL)")
      ->required();
  build->add_option("--classes", build_args.classes, "Number of classes C")
      ->required();
  build->add_option("--variant", build_args.variant,
                    "standard | softsum | softsum_pred | softsum_not_pred")
      ->capture_default_str();
  build->add_option("--out", build_args.out, "Output CSV path")->required();
  build->footer(
      "Prediction log: one JSON object per line, e.g.\n"
      "  {\"label\": 2, \"probs\": [0.1, 0.2, 0.7]}\n"
      "Output CSV: header '# classes=C variant=<tag>', then C comma-separated rows.");

  SymmetrizeArgs sym_args;
  CLI::App* sym = app.add_subcommand(
      "symmetrize", "Write the animosity matrix A^T + A of a confusion matrix CSV.");
  sym->add_option("--matrix", sym_args.matrix, "Confusion matrix CSV")->required();
  sym->add_option("--out", sym_args.out, "Output CSV path")->required();
  sym->footer(
      "Matrix CSV: optional '# classes=C variant=<tag>' header, then one\n"
      "comma-separated row per class, e.g.\n"
      "  # classes=2 variant=standard\n"
      "  3,1\n"
      "  0,4");

  ClusterArgs cluster_args;
  CLI::App* cluster = app.add_subcommand(
      "cluster", "Assign classes to clusters from an animosity matrix CSV.");
  cluster->add_option("--matrix", cluster_args.matrix,
                      "Animosity (or confusion; symmetrized on the fly) CSV")
      ->required();
  cluster->add_option("--algorithm", cluster_args.algorithm,
                      "greedy_pairs | greedy_single | kmeans | spectral")
      ->required();
  cluster->add_option("--n", cluster_args.n, "Number of clusters")->required();
  cluster->add_option("--seed", cluster_args.seed,
                      "RNG seed (kmeans and spectral only)")
      ->capture_default_str();
  cluster->add_flag("--argmin-variant", cluster_args.argmin_variant,
                    "Greedy algorithms send pairs/classes to the cluster with "
                    "minimal animosity (the literal pseudocode reading) instead "
                    "of maximal");
  cluster->add_option("--out", cluster_args.out, "Output JSON path")->required();
  cluster->footer(
      "Output JSON, clusters in creation order with members ascending:\n"
      "  {\"num_classes\": 4, \"overlapping\": true, \"algorithm\": "
      "\"greedy_pairs\",\n   \"seed\": null, \"clusters\": [[0, 1], [2, 3]]}");

  CombineEvalArgs combine_args;
  CLI::App* combine = app.add_subcommand(
      "combine-eval",
      "Ensemble accuracy of precomputed generalist + specialist prediction logs.");
  combine->add_option("--generalist", combine_args.generalist,
                      "Generalist prediction log (JSONL)")
      ->required();
  combine
      ->add_option("--specialists", combine_args.specialists,
                   "Specialist prediction logs, one per cluster, in cluster order")
      ->required()
      ->expected(-1);
  combine->add_option("--clustering", combine_args.clustering, "Clustering JSON")
      ->required();
  combine->add_option("--weight", combine_args.weight,
                      "Specialist weight w (generalist has weight 1)")
      ->capture_default_str();
  combine->add_flag("--no-generalist", combine_args.no_generalist,
                    "Leave the generalist out of the combination");
  combine->add_option("--gating", combine_args.gating,
                      "all_specialists | generalist_topk")
      ->capture_default_str();
  combine->add_option("--top-k", combine_args.top_k,
                      "k for generalist_topk gating")
      ->capture_default_str();
  combine->add_option("--out", combine_args.out, "Optional result JSON path");
  combine->footer(
      "All logs must be aligned record-for-record (same examples, same order).\n"
      "Result: {\"algorithm\", \"variant\", \"num_clusters\", \"accuracy\", "
      "\"config\"}.");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run the full synthetic experiment grid and write reports.");
  sweep->add_option("--config", sweep_args.config, "Sweep config JSON")->required();
  sweep->add_option("--out-dir", sweep_args.out_dir,
                    "Directory for report.json and report.txt")
      ->required();
  sweep->add_option("--jobs", sweep_args.jobs, "Parallel cells (results identical)")
      ->capture_default_str();
  sweep->footer(
      "Config JSON (all keys optional; defaults shown by the README), e.g.\n"
      "  {\"seed\": 1,\n"
      "   \"dataset\": {\"num_samples\": 14400, \"dims\": 16,\n"
      "                \"groups\": [{\"classes\": [0, 1], \"overlap\": 0.9}]},\n"
      "   \"algorithms\": [\"greedy_pairs\"], \"variants\": [\"standard\"],\n"
      "   \"cluster_counts\": [2, 3]}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (build->parsed()) return run_build_confusion(build_args);
    if (sym->parsed()) return run_symmetrize(sym_args);
    if (cluster->parsed()) return run_cluster(cluster_args);
    if (combine->parsed()) return run_combine_eval(combine_args);
    if (sweep->parsed()) return run_sweep_cmd(sweep_args);
  } catch (const specialists::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
