#include "copycat/copier.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>
#include <iomanip>

#include "copycat/error.hpp"
#include "copycat/metrics.hpp"
#include "copycat/parallel.hpp"
#include "copycat/random.hpp"

namespace copycat {

void CopyConfig::validate() const {
  if (n_train < 1) throw Error("copy.n_train must be >= 1");
  if (n_test < 1) throw Error("copy.n_test must be >= 1");
  if (runs < 1) throw Error("copy.runs must be >= 1");
  if (histogram_bins < 1) throw Error("copy.histogram_bins must be >= 1");
  if (chunk_size < 1) throw Error("copy.chunk_size must be >= 1");
  if (!(margin >= 0.0)) throw Error("copy.margin must be >= 0");
  copycat::validate(copy_train);
}

std::vector<std::string> CopyConfig::capacity_warnings() const {
  std::vector<std::string> out;
  if (copy_train.max_depth)
    out.push_back("copy max_depth=" + std::to_string(*copy_train.max_depth) +
                  " limits copy capacity; copies are meant to be trained without capacity control");
  if (copy_train.min_samples_split != 2)
    out.push_back("copy min_samples_split=" + std::to_string(copy_train.min_samples_split) +
                  " limits copy capacity; copies are meant to be trained without capacity control");
  return out;
}

nlohmann::json CopyConfig::to_json() const {
  nlohmann::json cart = {{"min_samples_split", copy_train.min_samples_split}};
  cart["max_depth"] = copy_train.max_depth ? nlohmann::json(*copy_train.max_depth) : nlohmann::json(nullptr);
  return {{"n_train", n_train}, {"n_test", n_test},   {"margin", margin},
          {"family", "cart"},   {"cart", cart},       {"runs", runs},
          {"base_seed", base_seed}, {"histogram_bins", histogram_bins}, {"chunk_size", chunk_size}};
}

nlohmann::json CopyResult::metrics_json() const {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"seed", seed},
          {"synthetic_train_accuracy", synthetic_train_accuracy},
          {"synthetic_test_fidelity", synthetic_test_fidelity},
          {"original_test_accuracy", opt(original_test_accuracy)},
          {"original_test_fidelity", opt(original_test_fidelity)},
          {"copy_depth", copy ? copy->depth() : 0},
          {"copy_leaves", copy ? copy->leaf_count() : 0}};
}

CopyResult build_copy(const Classifier& oracle, const SamplingRegion& region, const CopyConfig& cfg,
                      std::uint64_t seed, const LabeledDataset* original_test) {
  cfg.validate();
  region.validate();
  if (region.dim() != oracle.input_dim())
    throw Error("sampling region has " + std::to_string(region.dim()) + " dimensions, oracle expects " +
                std::to_string(oracle.input_dim()));

  SamplerConfig train_sampler{cfg.n_train, derive_seed(seed, 0), cfg.margin, cfg.chunk_size};
  const LabeledDataset synthetic = sample_labeled(region, oracle, train_sampler);

  CopyResult result;
  result.seed = seed;
  result.copy = std::make_shared<DecisionTreeModel>(cart_train(synthetic, cfg.copy_train));
  result.synthetic_train_accuracy = accuracy(result.copy->predict_batch(synthetic.features), synthetic.labels);
  if (cfg.capacity_warnings().empty() && result.synthetic_train_accuracy != 1.0) {
    throw Error("unconstrained copy reached synthetic training accuracy " +
                std::to_string(result.synthetic_train_accuracy) + " instead of 1");
  }

  // Fresh test stream, consumed one chunk at a time.
  SamplerConfig test_sampler{cfg.n_test, derive_seed(seed, 1), cfg.margin, cfg.chunk_size};
  std::size_t agree = 0;
  const std::size_t chunks = (cfg.n_test + cfg.chunk_size - 1) / cfg.chunk_size;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = c * cfg.chunk_size;
    const std::size_t count = std::min(cfg.n_test, begin + cfg.chunk_size) - begin;
    // same stream layout as sample_uniform
    Rng rng(test_sampler.seed, c);
    std::vector<double> point(region.dim());
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < point.size(); ++j) point[j] = rng.uniform(region.lower[j], region.upper[j]);
      agree += oracle.predict(point) == result.copy->predict(point) ? 1 : 0;
    }
  }
  result.synthetic_test_fidelity = static_cast<double>(agree) / static_cast<double>(cfg.n_test);

  if (original_test) {
    if (original_test->dim() != oracle.input_dim()) throw Error("original test set dimension != oracle dimension");
    const auto copy_pred = result.copy->predict_batch(original_test->features);
    result.original_test_accuracy = accuracy(copy_pred, original_test->labels);
    result.original_test_fidelity = accuracy(copy_pred, oracle.predict_batch(original_test->features));
  }
  return result;
}

MetricSummary summarize(const std::vector<double>& values) {
  if (values.empty()) throw Error("cannot summarize zero values");
  MetricSummary s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / (n - 1.0));
  }
  return s;
}

std::string format_mean_std(const MetricSummary& s, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << s.mean << " ± " << s.std;
  return os.str();
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
  if (values.empty()) throw Error("cannot histogram zero values");
  if (bins < 1) throw Error("histogram needs at least one bin");
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (!(hi > lo)) {
    lo -= 0.01;
    hi += 0.01;
  }
  Histogram h;
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(b == bins ? hi : lo + width * static_cast<double>(b));
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= bins) b = bins - 1;
    ++h.counts[b];
  }
  return h;
}

nlohmann::json Histogram::to_json() const { return {{"edges", edges}, {"counts", counts}}; }

std::size_t CopyStudy::median_run() const {
  std::vector<std::size_t> idx(runs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return runs[a].original_test_accuracy.value_or(runs[a].synthetic_test_fidelity) <
           runs[b].original_test_accuracy.value_or(runs[b].synthetic_test_fidelity);
  });
  return idx[(idx.size() - 1) / 2];
}

nlohmann::json CopyStudy::to_json() const {
  nlohmann::json per_run = nlohmann::json::array();
  for (const auto& r : runs) per_run.push_back(r.metrics_json());
  auto summary = [](const MetricSummary& s) {
    return nlohmann::json{{"mean", s.mean}, {"std", s.std}, {"formatted", format_mean_std(s)}};
  };
  return {{"config", config.to_json()},
          {"region", region.to_json()},
          {"per_run", per_run},
          {"aggregate",
           {{"synthetic_train_accuracy", summary(synthetic_train_accuracy)},
            {"synthetic_test_fidelity", summary(synthetic_test_fidelity)},
            {"original_test_accuracy", summary(original_test_accuracy)},
            {"original_test_fidelity", summary(original_test_fidelity)}}},
          {"accuracy_histogram", accuracy_histogram.to_json()},
          {"warnings", warnings}};
}

CopyStudy run_study(const Classifier& oracle, const SamplingRegion& region, const CopyConfig& cfg,
                    const LabeledDataset& original_test, std::size_t threads) {
  cfg.validate();
  CopyStudy study;
  study.config = cfg;
  study.region = region;
  study.warnings = cfg.capacity_warnings();
  for (const auto& w : study.warnings) std::clog << "warning: " << w << '\n';

  study.runs.resize(cfg.runs);
  parallel_for(cfg.runs, threads, [&](std::size_t r) {
    study.runs[r] = build_copy(oracle, region, cfg, cfg.base_seed + r, &original_test);
  });

  std::vector<double> train_acc, fidelity, test_acc, test_fid;
  for (const auto& r : study.runs) {
    train_acc.push_back(r.synthetic_train_accuracy);
    fidelity.push_back(r.synthetic_test_fidelity);
    test_acc.push_back(*r.original_test_accuracy);
    test_fid.push_back(*r.original_test_fidelity);
  }
  study.synthetic_train_accuracy = summarize(train_acc);
  study.synthetic_test_fidelity = summarize(fidelity);
  study.original_test_accuracy = summarize(test_acc);
  study.original_test_fidelity = summarize(test_fid);
  study.accuracy_histogram = make_histogram(test_acc, cfg.histogram_bins);
  return study;
}

nlohmann::json FidelitySweep::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {{"n", r.n},
                          {"runs", r.runs},
                          {"mean_fidelity", r.synthetic_test_fidelity.mean},
                          {"std_fidelity", r.synthetic_test_fidelity.std}};
    if (r.original_test_accuracy) {
      row["mean_original_accuracy"] = r.original_test_accuracy->mean;
      row["std_original_accuracy"] = r.original_test_accuracy->std;
    }
    rows_json.push_back(row);
  }
  return {{"rows", rows_json}};
}

std::string FidelitySweep::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17) << "n,runs,mean_fidelity,std_fidelity\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.runs << ',' << r.synthetic_test_fidelity.mean << ',' << r.synthetic_test_fidelity.std << '\n';
  return os.str();
}

FidelitySweep fidelity_vs_n_sweep(const Classifier& oracle, const SamplingRegion& region,
                                  const std::vector<std::size_t>& n_values, std::size_t runs_per_n,
                                  std::uint64_t base_seed, const CopyConfig& base,
                                  const LabeledDataset* original_test, std::size_t threads) {
  if (n_values.empty()) throw Error("fidelity sweep needs at least one N");
  for (std::size_t i = 1; i < n_values.size(); ++i)
    if (n_values[i] <= n_values[i - 1]) throw Error("fidelity sweep N values must be strictly increasing");
  if (runs_per_n < 1) throw Error("fidelity sweep needs runs_per_n >= 1");

  FidelitySweep sweep;
  for (std::size_t n : n_values) {
    CopyConfig cfg = base;
    cfg.n_train = n;
    cfg.runs = runs_per_n;
    cfg.base_seed = base_seed;
    cfg.validate();
    std::vector<CopyResult> results(runs_per_n);
    parallel_for(runs_per_n, threads, [&](std::size_t r) {
      results[r] = build_copy(oracle, region, cfg, base_seed + r, original_test);
      results[r].copy.reset();
    });
    SweepRow row;
    row.n = n;
    row.runs = runs_per_n;
    std::vector<double> fid, acc;
    for (const auto& r : results) {
      fid.push_back(r.synthetic_test_fidelity);
      if (r.original_test_accuracy) acc.push_back(*r.original_test_accuracy);
    }
    row.synthetic_test_fidelity = summarize(fid);
    if (!acc.empty()) row.original_test_accuracy = summarize(acc);
    sweep.rows.push_back(row);
  }
  return sweep;
}

}  // namespace copycat
