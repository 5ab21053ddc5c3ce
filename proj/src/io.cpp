#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "specialists/io.hpp"

namespace specialists::io {

namespace {

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

double parse_double(const std::string& token, std::size_t line) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    fail_line(line, "not a number: '" + token + "'");
  }
  while (consumed < token.size() && std::isspace(static_cast<unsigned char>(token[consumed]))) {
    ++consumed;
  }
  if (consumed != token.size()) {
    fail_line(line, "trailing characters after number: '" + token + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_matrix_csv(std::ostream& out, const Eigen::Ref<const Matrix>& matrix,
                      const std::optional<std::string>& variant) {
  if (variant) {
    out << "# classes=" << matrix.rows() << " variant=" << *variant << "\n";
  }
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      if (c > 0) out << ",";
      out << format_double(matrix(r, c));
    }
    out << "\n";
  }
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::Ref<const Matrix>& matrix,
                      const std::optional<std::string>& variant) {
  auto out = open_output(path);
  write_matrix_csv(out, matrix, variant);
}

MatrixCsv read_matrix_csv(std::istream& in) {
  MatrixCsv result;
  std::optional<long> declared_classes;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line_number != 1) fail_line(line_number, "header allowed only on the first line");
      std::istringstream header(line.substr(1));
      std::string field;
      while (header >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) fail_line(1, "malformed header field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "classes") {
          declared_classes = static_cast<long>(parse_double(value, 1));
        } else if (key == "variant") {
          result.variant = value;
        } else {
          fail_line(1, "unknown header field '" + key + "'");
        }
      }
      continue;
    }
    std::vector<double> row;
    std::string token;
    std::istringstream cells(line);
    while (std::getline(cells, token, ',')) {
      row.push_back(parse_double(token, line_number));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail_line(line_number, "inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::runtime_error("empty matrix");
  }
  if (declared_classes && *declared_classes != static_cast<long>(rows.size())) {
    throw std::runtime_error("header declares classes=" +
                             std::to_string(*declared_classes) + " but found " +
                             std::to_string(rows.size()) + " rows");
  }
  result.matrix.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      result.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  return result;
}

MatrixCsv read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_matrix_csv(in);
}

void write_prediction_log(std::ostream& out,
                          std::span<const PredictionRecord> records) {
  for (const PredictionRecord& record : records) {
    nlohmann::ordered_json object;
    object["label"] = record.true_label;
    object["probs"] = std::vector<double>(
        record.probabilities.data(),
        record.probabilities.data() + record.probabilities.size());
    out << object.dump() << "\n";
  }
}

void write_prediction_log(const std::filesystem::path& path,
                          std::span<const PredictionRecord> records) {
  auto out = open_output(path);
  write_prediction_log(out, records);
}

std::vector<PredictionRecord> read_prediction_log(std::istream& in) {
  std::vector<PredictionRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail_line(line_number, e.what());
    }
    if (!object.is_object() || !object.contains("label") || !object.contains("probs")) {
      fail_line(line_number, "expected {\"label\": int, \"probs\": [...]}");
    }
    PredictionRecord record;
    try {
      record.true_label = object.at("label").get<int>();
      const auto probs = object.at("probs").get<std::vector<double>>();
      record.probabilities =
          Eigen::Map<const Vector>(probs.data(), static_cast<Eigen::Index>(probs.size()));
    } catch (const nlohmann::json::exception& e) {
      fail_line(line_number, e.what());
    }
    if (!records.empty() &&
        record.probabilities.size() != records.front().probabilities.size()) {
      fail_line(line_number,
                "probability vector length changed from " +
                    std::to_string(records.front().probabilities.size()) + " to " +
                    std::to_string(record.probabilities.size()));
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<PredictionRecord> read_prediction_log(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_prediction_log(in);
}

nlohmann::ordered_json clustering_to_json(const Clustering& clustering) {
  nlohmann::ordered_json object;
  object["num_classes"] = clustering.num_classes;
  object["overlapping"] = clustering.overlapping;
  object["algorithm"] = clustering.algorithm;
  if (clustering.seed) {
    object["seed"] = *clustering.seed;
  } else {
    object["seed"] = nullptr;
  }
  object["clusters"] = clustering.clusters;
  return object;
}

Clustering clustering_from_json(const nlohmann::json& value) {
  Clustering clustering;
  try {
    clustering.num_classes = value.at("num_classes").get<int>();
    clustering.overlapping = value.at("overlapping").get<bool>();
    clustering.algorithm = value.at("algorithm").get<std::string>();
    if (value.at("seed").is_null()) {
      clustering.seed.reset();
    } else {
      clustering.seed = value.at("seed").get<std::uint64_t>();
    }
    clustering.clusters = value.at("clusters").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed clustering JSON: ") + e.what());
  }
  for (const auto& cluster : clustering.clusters) {
    if (cluster.empty()) {
      throw std::runtime_error("malformed clustering JSON: empty cluster");
    }
    for (int cls : cluster) {
      if (cls < 0 || cls >= clustering.num_classes) {
        throw std::runtime_error("malformed clustering JSON: class index out of range");
      }
    }
  }
  return clustering;
}

void write_clustering(const std::filesystem::path& path, const Clustering& clustering) {
  write_text_file(path, clustering_to_json(clustering).dump(2) + "\n");
}

Clustering read_clustering(const std::filesystem::path& path) {
  nlohmann::json value;
  auto in = open_input(path);
  try {
    in >> value;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return clustering_from_json(value);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  auto out = open_output(path);
  out << content;
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace specialists::io
