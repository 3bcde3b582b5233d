#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "copycat/classifier.hpp"
#include "copycat/data.hpp"
#include "copycat/error.hpp"
#include "copycat/random.hpp"

namespace testing_support {

// Classifier backed by a plain function; not persistable.
class FnClassifier final : public copycat::Classifier {
 public:
  using Fn = std::function<int(std::span<const double>)>;
  FnClassifier(std::size_t dim, Fn fn, int classes = 2) : dim_(dim), classes_(classes), fn_(std::move(fn)) {}

  int predict(std::span<const double> x) const override {
    check_dim(x);
    return fn_(x);
  }
  std::size_t input_dim() const override { return dim_; }
  int class_count() const override { return classes_; }
  std::string family() const override { return "fn"; }
  nlohmann::json payload() const override { throw copycat::Error("function classifier cannot be saved"); }

 private:
  std::size_t dim_;
  int classes_;
  Fn fn_;
};

inline copycat::Schema numeric_schema(std::size_t d) {
  copycat::Schema s;
  for (std::size_t j = 0; j < d; ++j) s.push_back(copycat::FeatureSpec::numeric("f" + std::to_string(j)));
  return s;
}

inline copycat::LabeledDataset make_dataset(copycat::Matrix x, std::vector<int> y, int classes = 2) {
  copycat::LabeledDataset d;
  d.schema = numeric_schema(x.cols());
  d.features = std::move(x);
  d.labels = std::move(y);
  d.class_count = classes;
  return d;
}

// Features on a coarse grid (so duplicate rows occur) with labels that are a
// function of the feature vector.
inline copycat::LabeledDataset consistent_random_dataset(std::size_t n, std::size_t d, int classes,
                                                         std::uint64_t seed) {
  copycat::Rng rng(seed);
  copycat::Matrix x(n, d);
  std::vector<int> y(n);
  std::map<std::vector<double>, int> seen;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(d);
    for (auto& v : row) v = static_cast<double>(rng.below(5)) - 2.0;
    auto [it, fresh] = seen.emplace(row, static_cast<int>(rng.below(static_cast<std::uint64_t>(classes))));
    y[i] = it->second;
    std::copy(row.begin(), row.end(), x.row(i).begin());
  }
  // Guarantee every class appears at least once when possible.
  for (int c = 0; c < classes && static_cast<std::size_t>(c) < n; ++c) {
    bool present = false;
    for (int v : y) present = present || v == c;
    if (!present) {
      x(static_cast<std::size_t>(c), 0) = 100.0 + c;
      y[static_cast<std::size_t>(c)] = c;
    }
  }
  return make_dataset(std::move(x), std::move(y), classes);
}

// Continuous two-class data: label 1 when a nonlinear score is positive.
inline copycat::LabeledDataset smooth_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
  copycat::Rng rng(seed);
  copycat::Matrix x(n, d);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.uniform(-2.0, 2.0);
    double s = x(i, 0) * x(i, 0) - 1.0;
    if (d > 1) s += x(i, 0) * x(i, 1);
    if (d > 2) s += 0.5 * std::sin(2.0 * x(i, 2));
    y[i] = s + 0.3 * rng.normal() > 0.0 ? 1 : 0;
  }
  return make_dataset(std::move(x), std::move(y));
}

// Symmetric relative difference, with absolute slack below `floor`.
inline double rel_diff(double a, double b, double floor = 1e-8) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Fresh scratch directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("copycat_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
