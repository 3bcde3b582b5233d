#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "copycat/classifier.hpp"
#include "copycat/data.hpp"

namespace copycat {

// Axis-aligned box [lower_i, upper_i] over the original feature space.
struct SamplingRegion {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const { return lower.size(); }
  void validate() const;
  bool contains(std::span<const double> point) const;

  nlohmann::json to_json() const;
  static SamplingRegion from_json(const nlohmann::json& j);
};

enum class SamplingDistribution { uniform };

struct SamplerConfig {
  std::size_t n_samples = 1'000'000;
  std::uint64_t seed = 0;
  double margin = 0.05;
  std::size_t chunk_size = 65536;
  SamplingDistribution distribution = SamplingDistribution::uniform;
};

// Per feature: [min - margin * range, max + margin * range]; zero-range
// features become [value - 0.5, value + 0.5].
SamplingRegion fit_region(const LabeledDataset& data, double margin);

// Chunk c of size chunk_size is drawn from substream (seed, c), so the
// matrix is identical for any worker count.
Matrix sample_uniform(const SamplingRegion& region, const SamplerConfig& cfg, std::size_t threads = 1);

// labels[j] = oracle.predict(points row j).
LabeledDataset label_with_oracle(const Matrix& points, const Classifier& oracle, const Schema& schema = {},
                                 std::size_t threads = 1);

// Draws and labels chunk by chunk.
LabeledDataset sample_labeled(const SamplingRegion& region, const Classifier& oracle, const SamplerConfig& cfg,
                              const Schema& schema = {}, std::size_t threads = 1);

// Audit dump with a `synthetic_label` column.
void write_synthetic_csv(const std::filesystem::path& path, const LabeledDataset& synthetic);

}  // namespace copycat
