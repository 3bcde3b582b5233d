#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "copycat/matrix.hpp"

namespace copycat {

enum class FeatureKind { numeric, nominal };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::vector<std::string> categories;  // nominal only, index = encoded value

  static FeatureSpec numeric(std::string name) { return {std::move(name), FeatureKind::numeric, {}}; }
  static FeatureSpec nominal(std::string name, std::vector<std::string> categories) {
    return {std::move(name), FeatureKind::nominal, std::move(categories)};
  }

  bool operator==(const FeatureSpec&) const = default;
};

using Schema = std::vector<FeatureSpec>;

// Throws on duplicate names, empty or duplicated category lists.
void validate_schema(const Schema& schema);
std::vector<std::string> feature_names(const Schema& schema);

// Feature matrix plus integer class labels in {0..class_count-1}.
struct LabeledDataset {
  Matrix features;
  std::vector<int> labels;
  Schema schema;
  int class_count = 2;
  std::vector<std::string> class_names;  // optional, index = class

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }

  // Checks shape agreement, finiteness and label range.
  void validate() const;

  LabeledDataset subset(const std::vector<std::size_t>& rows) const;
  std::vector<std::size_t> class_counts() const;
};

struct CsvOptions {
  std::string label_column;
  std::optional<Schema> schema_hint;
  std::optional<std::vector<std::string>> class_names;  // fixes label coding
};

// Reads a comma-delimited file with a header row. Columns whose every cell
// parses as a finite number are numeric, the rest nominal, unless a schema
// hint says otherwise. Categories and classes are coded by first appearance.
LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options);
LabeledDataset load_csv(const std::filesystem::path& path, const std::string& label_column);

// Writes features (nominal columns decoded back to category strings when
// `decode_nominals`) followed by the label column.
void write_csv(const std::filesystem::path& path, const LabeledDataset& data,
               const std::string& label_column, bool decode_nominals = true);

// Category index of each value as a real number.
std::vector<double> encode_nominals(const std::vector<std::string>& raw, const FeatureSpec& spec);
std::vector<std::string> decode_nominals(const std::vector<double>& encoded, const FeatureSpec& spec);

struct Standardizer {
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<bool> constant_columns;  // std was substituted by 1

  std::size_t dim() const { return means.size(); }
  std::vector<double> transform(std::span<const double> x) const;
  nlohmann::json to_json() const;
  static Standardizer from_json(const nlohmann::json& j);
};

Standardizer fit_standardizer(const LabeledDataset& data);
LabeledDataset apply_standardizer(const LabeledDataset& data, const Standardizer& s);
LabeledDataset invert_standardizer(const LabeledDataset& data, const Standardizer& s);

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

// Per class, round-half-up(train_fraction * count) rows go to train (clamped
// to [1, count-1]); the rest to test. Rows keep their original relative order.
std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& data,
                                                           const SplitConfig& cfg);

// Number of rows of a class with `count` members assigned to the train side.
std::size_t stratified_train_count(std::size_t count, double train_fraction);

}  // namespace copycat
