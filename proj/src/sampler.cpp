#include "copycat/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "copycat/error.hpp"
#include "copycat/parallel.hpp"
#include "copycat/random.hpp"

namespace copycat {

void SamplingRegion::validate() const {
  if (lower.empty()) throw Error("sampling region has zero dimensions");
  if (lower.size() != upper.size()) throw Error("sampling region bounds have different lengths");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i]))
      throw Error("sampling region dimension " + std::to_string(i) + " needs finite lower < upper");
  }
}

bool SamplingRegion::contains(std::span<const double> point) const {
  if (point.size() != dim()) return false;
  for (std::size_t i = 0; i < point.size(); ++i)
    if (!(point[i] >= lower[i] && point[i] <= upper[i])) return false;
  return true;
}

nlohmann::json SamplingRegion::to_json() const { return {{"lower", lower}, {"upper", upper}}; }

SamplingRegion SamplingRegion::from_json(const nlohmann::json& j) {
  SamplingRegion r{j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>()};
  r.validate();
  return r;
}

SamplingRegion fit_region(const LabeledDataset& data, double margin) {
  if (data.features.rows() == 0) throw Error("cannot fit a sampling region on empty data");
  if (!(margin >= 0.0) || !std::isfinite(margin)) throw Error("sampling margin must be >= 0");
  SamplingRegion region;
  for (std::size_t j = 0; j < data.dim(); ++j) {
    double lo = data.features(0, j);
    double hi = lo;
    for (std::size_t r = 1; r < data.size(); ++r) {
      lo = std::min(lo, data.features(r, j));
      hi = std::max(hi, data.features(r, j));
    }
    const double range = hi - lo;
    if (range > 0.0) {
      region.lower.push_back(lo - margin * range);
      region.upper.push_back(hi + margin * range);
    } else {
      region.lower.push_back(lo - 0.5);
      region.upper.push_back(hi + 0.5);
    }
  }
  region.validate();
  return region;
}

namespace {

void check_config(const SamplerConfig& cfg) {
  if (cfg.n_samples < 1) throw Error("sampler n_samples must be >= 1");
  if (cfg.chunk_size < 1) throw Error("sampler chunk_size must be >= 1");
}

void fill_chunk(const SamplingRegion& region, const SamplerConfig& cfg, std::size_t chunk, Matrix& out) {
  Rng rng(cfg.seed, chunk);
  const std::size_t begin = chunk * cfg.chunk_size;
  const std::size_t end = std::min(cfg.n_samples, begin + cfg.chunk_size);
  for (std::size_t r = begin; r < end; ++r) {
    auto row = out.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = rng.uniform(region.lower[j], region.upper[j]);
  }
}

}  // namespace

Matrix sample_uniform(const SamplingRegion& region, const SamplerConfig& cfg, std::size_t threads) {
  region.validate();
  check_config(cfg);
  Matrix out(cfg.n_samples, region.dim());
  const std::size_t chunks = (cfg.n_samples + cfg.chunk_size - 1) / cfg.chunk_size;
  parallel_for(chunks, threads, [&](std::size_t c) { fill_chunk(region, cfg, c, out); });
  return out;
}

LabeledDataset label_with_oracle(const Matrix& points, const Classifier& oracle, const Schema& schema,
                                 std::size_t threads) {
  if (points.cols() != oracle.input_dim())
    throw Error("points have " + std::to_string(points.cols()) + " columns, oracle expects " +
                std::to_string(oracle.input_dim()));
  LabeledDataset out;
  out.features = points;
  out.labels.assign(points.rows(), 0);
  out.schema = schema;
  out.class_count = oracle.class_count();
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (points.rows() + kBlock - 1) / kBlock;
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(points.rows(), (b + 1) * kBlock);
    for (std::size_t r = b * kBlock; r < end; ++r) {
      try {
        out.labels[r] = oracle.predict(points.row(r));
      } catch (const std::exception& e) {
        throw Error("oracle failed on synthetic row " + std::to_string(r) + ": " + e.what());
      }
    }
  });
  return out;
}

LabeledDataset sample_labeled(const SamplingRegion& region, const Classifier& oracle, const SamplerConfig& cfg,
                              const Schema& schema, std::size_t threads) {
  region.validate();
  check_config(cfg);
  if (region.dim() != oracle.input_dim())
    throw Error("sampling region has " + std::to_string(region.dim()) + " dimensions, oracle expects " +
                std::to_string(oracle.input_dim()));
  LabeledDataset out;
  out.features = Matrix(cfg.n_samples, region.dim());
  out.labels.assign(cfg.n_samples, 0);
  out.schema = schema;
  out.class_count = oracle.class_count();
  const std::size_t chunks = (cfg.n_samples + cfg.chunk_size - 1) / cfg.chunk_size;
  parallel_for(chunks, threads, [&](std::size_t c) {
    fill_chunk(region, cfg, c, out.features);
    const std::size_t end = std::min(cfg.n_samples, (c + 1) * cfg.chunk_size);
    for (std::size_t r = c * cfg.chunk_size; r < end; ++r) {
      try {
        out.labels[r] = oracle.predict(out.features.row(r));
      } catch (const std::exception& e) {
        throw Error("oracle failed on synthetic row " + std::to_string(r) + ": " + e.what());
      }
    }
  });
  return out;
}

void write_synthetic_csv(const std::filesystem::path& path, const LabeledDataset& synthetic) {
  write_csv(path, synthetic, "synthetic_label", false);
}

}  // namespace copycat
