#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "specialists/types.hpp"

namespace specialists::io {

/// Matrix CSV: one comma-separated row per matrix row, values printed with
/// %.17g so doubles round-trip, preceded by an optional header row
/// `# classes=C variant=<tag>`.
void write_matrix_csv(std::ostream& out, const Eigen::Ref<const Matrix>& matrix,
                      const std::optional<std::string>& variant = std::nullopt);
void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::Ref<const Matrix>& matrix,
                      const std::optional<std::string>& variant = std::nullopt);

struct MatrixCsv {
  Matrix matrix;
  std::optional<std::string> variant;
};

/// Throws std::runtime_error with a line number on malformed input and when a
/// header's class count disagrees with the data.
MatrixCsv read_matrix_csv(std::istream& in);
MatrixCsv read_matrix_csv(const std::filesystem::path& path);

/// Prediction log: one JSON object {"label": int, "probs": [...]} per line.
void write_prediction_log(std::ostream& out,
                          std::span<const PredictionRecord> records);
void write_prediction_log(const std::filesystem::path& path,
                          std::span<const PredictionRecord> records);

/// Throws std::runtime_error with a 1-based line number on parse failure.
std::vector<PredictionRecord> read_prediction_log(std::istream& in);
std::vector<PredictionRecord> read_prediction_log(const std::filesystem::path& path);

nlohmann::ordered_json clustering_to_json(const Clustering& clustering);
Clustering clustering_from_json(const nlohmann::json& value);

void write_clustering(const std::filesystem::path& path, const Clustering& clustering);
Clustering read_clustering(const std::filesystem::path& path);

/// Shared helpers so every writer produces identical bytes for equal values.
std::string format_double(double value);
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace specialists::io
