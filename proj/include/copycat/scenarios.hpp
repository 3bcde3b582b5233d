#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "copycat/copier.hpp"
#include "copycat/data.hpp"
#include "copycat/metrics.hpp"
#include "copycat/pipeline.hpp"
#include "copycat/train_config.hpp"

namespace copycat {

// Synthetic stand-in for a private mortgage-default table.
struct CreditGenConfig {
  std::size_t n_rows = 1328;
  double default_rate = 0.23;
  std::uint64_t seed = 0;
  std::size_t d_raw = 19;  // fixed attribute list; other values are rejected
  double noise = 0.6;      // std of the Gaussian noise added to the latent score

  void validate() const;
  nlohmann::json to_json() const;
};

// 13 numeric and 6 nominal attributes, drawn independently per row. A row
// defaults when its latent score
//   2.5 a^2 + 2.5 l r + 0.8 (debt - income) + 0.6 q - 0.5 e + 0.5 [informal] + noise
// is among the round(default_rate * n_rows) largest, where a, l, r, debt,
// income, q and e are age, loan amount, interest rate, monthly debt,
// monthly income, delinquency count and economy level rescaled to [-1, 1].
// Labels: 0 = repaid, 1 = default.
LabeledDataset generate_credit_like(const CreditGenConfig& cfg);
Schema credit_schema();

// The four engineered variables plus age and economy_level, defined on
// standardized raw attributes.
FeatureMap credit_engineered_map(const Schema& schema);

// Two interleaved half-circles with Gaussian jitter.
struct ToyConfig {
  std::size_t n_rows = 1000;
  double noise = 0.18;
  std::size_t grid_resolution = 100;
  std::size_t runs = 5;
  MlpConfig mlp{{32, 32}, 0.05, 300, 32, 0};

  nlohmann::json to_json() const;
};

LabeledDataset generate_interleaved_arcs(std::size_t n_rows, double noise, std::uint64_t seed);

struct ScenarioConfig {
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  CreditGenConfig credit;
  ToyConfig toy;
  TrainConfig models;
  CopyConfig copy;  // base_seed is derived from seed
  bool paper_scale = false;

  ScenarioConfig();
  // N = 10^6 synthetic train/test points and 100 runs.
  void apply_paper_scale();
  nlohmann::json to_json() const;
};

struct ScenarioReport {
  std::string scenario;
  std::string original_model;
  double original_accuracy = 0.0;
  std::map<std::string, double> baselines;
  CopyStudy study;
  std::optional<ImportanceReport> importance;
  std::optional<Matrix> boundary_grid;  // columns: x, y, original label, copy label
  std::size_t copy_input_dim = 0;
  std::size_t oracle_internal_dim = 0;
  nlohmann::json config;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
  // report.json, copy_accuracies.csv, accuracy_histogram.csv and, when
  // present, importance_{original,copy}.csv and boundary_grid.csv.
  void write(const std::filesystem::path& dir) const;
};

ScenarioReport run_scenario1(const LabeledDataset& data, const ScenarioConfig& cfg, std::size_t threads = 1);
ScenarioReport run_scenario2(const LabeledDataset& data, const ScenarioConfig& cfg, std::size_t threads = 1);
ScenarioReport run_toy(const ScenarioConfig& cfg, std::size_t threads = 1);

}  // namespace copycat
