#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "copycat/classifier.hpp"
#include "copycat/data.hpp"
#include "copycat/sampler.hpp"
#include "copycat/train_config.hpp"
#include "copycat/tree.hpp"

namespace copycat {

enum class CopyFamily { cart };

struct CopyConfig {
  std::size_t n_train = 100'000;
  std::size_t n_test = 100'000;
  double margin = 0.05;  // echoed in reports; applied when the region is fitted
  CopyFamily family = CopyFamily::cart;
  CartConfig copy_train;  // max_depth absent: no capacity control
  std::size_t runs = 30;
  std::uint64_t base_seed = 0;
  std::size_t histogram_bins = 20;
  std::size_t chunk_size = 65536;

  void validate() const;
  nlohmann::json to_json() const;
  // Constraints on the copy model, one message each; empty when unconstrained.
  std::vector<std::string> capacity_warnings() const;
};

struct CopyResult {
  std::shared_ptr<const DecisionTreeModel> copy;
  double synthetic_train_accuracy = 0.0;
  double synthetic_test_fidelity = 0.0;
  std::optional<double> original_test_accuracy;
  std::optional<double> original_test_fidelity;
  std::uint64_t seed = 0;

  nlohmann::json metrics_json() const;
};

// Trains one copy: n_train points from substream (seed, 0) labeled by the
// oracle, then fidelity on n_test fresh points from substream (seed, 1),
// evaluated chunk by chunk. Original-data metrics are filled when
// `original_test` is given. For an unconstrained CART copy, a synthetic
// training accuracy below 1 is an error.
CopyResult build_copy(const Classifier& oracle, const SamplingRegion& region, const CopyConfig& cfg,
                      std::uint64_t seed, const LabeledDataset* original_test = nullptr);

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1) standard deviation; 0 for one run
};

MetricSummary summarize(const std::vector<double>& values);
// "m ± s" with the given number of decimals.
std::string format_mean_std(const MetricSummary& s, int decimals = 3);

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::size_t> counts;

  nlohmann::json to_json() const;
};

// Equal-width bins over [min, max] of the values; the maximum lands in the
// last bin. A zero-width range is widened to [v - 0.01, v + 0.01].
Histogram make_histogram(const std::vector<double>& values, std::size_t bins);

struct CopyStudy {
  CopyConfig config;
  SamplingRegion region;
  std::vector<CopyResult> runs;  // index r used seed base_seed + r
  MetricSummary synthetic_train_accuracy;
  MetricSummary synthetic_test_fidelity;
  MetricSummary original_test_accuracy;
  MetricSummary original_test_fidelity;
  Histogram accuracy_histogram;
  std::vector<std::string> warnings;

  // Run whose original-test accuracy is the lower median.
  std::size_t median_run() const;
  nlohmann::json to_json() const;
};

// Independent runs with seeds base_seed + r, executed on up to `threads`
// workers; results are identical for any worker count.
CopyStudy run_study(const Classifier& oracle, const SamplingRegion& region, const CopyConfig& cfg,
                    const LabeledDataset& original_test, std::size_t threads = 1);

struct SweepRow {
  std::size_t n = 0;
  std::size_t runs = 0;
  MetricSummary synthetic_test_fidelity;
  std::optional<MetricSummary> original_test_accuracy;
};

struct FidelitySweep {
  std::vector<SweepRow> rows;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// One study per training size n (strictly increasing), each with
// runs_per_n runs seeded base_seed + r.
FidelitySweep fidelity_vs_n_sweep(const Classifier& oracle, const SamplingRegion& region,
                                  const std::vector<std::size_t>& n_values, std::size_t runs_per_n,
                                  std::uint64_t base_seed, const CopyConfig& base,
                                  const LabeledDataset* original_test = nullptr, std::size_t threads = 1);

}  // namespace copycat
