#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "copycat/classifier.hpp"

namespace copycat {

// Fraction of positions where the two label vectors agree.
double accuracy(const std::vector<int>& predictions, const std::vector<int>& truth);

// Fraction of rows of `points` on which the two models predict the same class.
double agreement(const Classifier& a, const Classifier& b, const Matrix& points);

// Gini concentration coefficient of a nonnegative weight vector:
// sum_ij |w_i - w_j| / (2 d sum w). 0 for uniform, (d-1)/d for a point mass.
double concentration_index(const std::vector<double>& weights);

// Average ranks (1-based, ties share the mean rank), ascending by value.
std::vector<double> average_ranks(const std::vector<double>& values);

// Pearson correlation of average ranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// Indices of the k largest entries; ties go to the lower index.
std::vector<std::size_t> top_k(const std::vector<double>& values, std::size_t k);

struct ImportanceReport {
  std::vector<std::string> names;
  std::vector<double> original;
  std::vector<double> copy;
  std::vector<std::size_t> order;  // feature indices, copy importance descending
  double spearman = 0.0;
  std::size_t top3_overlap = 0;
  std::size_t top5_overlap = 0;
  double original_concentration = 0.0;
  double copy_concentration = 0.0;

  nlohmann::json to_json() const;
  // Two-column CSV (feature,importance) in `order`, for one of the models.
  void write_csv(const std::filesystem::path& path, bool copy_model) const;
};

ImportanceReport compare_importances(const std::vector<double>& original, const std::vector<double>& copy,
                                     const std::vector<std::string>& names);

}  // namespace copycat
