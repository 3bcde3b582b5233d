#include "copycat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>

#include "copycat/error.hpp"

namespace copycat {

double accuracy(const std::vector<int>& predictions, const std::vector<int>& truth) {
  if (predictions.size() != truth.size())
    throw Error("accuracy: length mismatch (" + std::to_string(predictions.size()) + " vs " +
                std::to_string(truth.size()) + ")");
  if (truth.empty()) throw Error("accuracy: empty label vectors");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predictions[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double agreement(const Classifier& a, const Classifier& b, const Matrix& points) {
  if (a.input_dim() != b.input_dim()) throw Error("agreement: models have different input dimensions");
  return accuracy(a.predict_batch(points), b.predict_batch(points));
}

double concentration_index(const std::vector<double>& weights) {
  if (weights.empty()) throw Error("concentration index of an empty vector");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw Error("concentration index needs finite nonnegative weights");
    sum += w;
  }
  if (!(sum > 0.0)) throw Error("concentration index of an all-zero vector");
  // Sorted form of sum_ij |w_i - w_j|: 2 * sum_i (2i - d + 1) w_(i).
  std::vector<double> sorted(weights);
  for (double& w : sorted) w /= sum;
  std::sort(sorted.begin(), sorted.end());
  const auto d = static_cast<double>(sorted.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) acc += (2.0 * static_cast<double>(i) - d + 1.0) * sorted[i];
  return std::max(0.0, acc / d);
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("spearman: length mismatch");
  if (a.size() < 2) throw Error("spearman: need at least two values");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

std::vector<std::size_t> top_k(const std::vector<double>& values, std::size_t k) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

namespace {

std::size_t overlap(const std::vector<double>& a, const std::vector<double>& b, std::size_t k) {
  const auto ta = top_k(a, k);
  const auto tb = top_k(b, k);
  return static_cast<std::size_t>(
      std::count_if(ta.begin(), ta.end(), [&](std::size_t i) { return std::find(tb.begin(), tb.end(), i) != tb.end(); }));
}

}  // namespace

ImportanceReport compare_importances(const std::vector<double>& original, const std::vector<double>& copy,
                                     const std::vector<std::string>& names) {
  if (original.size() != copy.size() || original.size() != names.size())
    throw Error("compare_importances: vectors and names must have equal length");
  ImportanceReport report;
  report.names = names;
  report.original = original;
  report.copy = copy;
  report.order = top_k(copy, copy.size());
  report.spearman = original.size() >= 2 ? spearman(original, copy) : 1.0;
  report.top3_overlap = overlap(original, copy, 3);
  report.top5_overlap = overlap(original, copy, 5);
  report.original_concentration = concentration_index(original);
  report.copy_concentration = concentration_index(copy);
  return report;
}

nlohmann::json ImportanceReport::to_json() const {
  nlohmann::json features = nlohmann::json::array();
  for (std::size_t i : order)
    features.push_back({{"name", names[i]}, {"original", original[i]}, {"copy", copy[i]}});
  return {{"features", features},
          {"spearman", spearman},
          {"top3_overlap", top3_overlap},
          {"top5_overlap", top5_overlap},
          {"original_concentration", original_concentration},
          {"copy_concentration", copy_concentration}};
}

void ImportanceReport::write_csv(const std::filesystem::path& path, bool copy_model) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "feature,importance\n" << std::setprecision(17);
  for (std::size_t i : order) out << names[i] << ',' << (copy_model ? copy[i] : original[i]) << '\n';
}

}  // namespace copycat
