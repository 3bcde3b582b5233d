#pragma once

#include <vector>

#include "copycat/classifier.hpp"
#include "copycat/data.hpp"
#include "copycat/train_config.hpp"
#include "copycat/tree.hpp"

namespace copycat {

// Binary gradient-boosted trees on the logistic loss.
// score(x) = initial_score + learning_rate * sum_m tree_m(x); class 1 iff score > 0.
class GradientBoostedTreesModel final : public Classifier {
 public:
  GradientBoostedTreesModel(double initial_score, double learning_rate, std::vector<RegressionTree> trees,
                            std::size_t input_dim);

  double score(std::span<const double> point) const;
  int predict(std::span<const double> point) const override;
  std::size_t input_dim() const override { return input_dim_; }
  int class_count() const override { return 2; }
  std::string family() const override { return "gbt"; }
  nlohmann::json payload() const override;
  static std::shared_ptr<const GradientBoostedTreesModel> from_payload(const nlohmann::json& j);

  double initial_score() const { return initial_score_; }
  double learning_rate() const { return learning_rate_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }

 private:
  double initial_score_;
  double learning_rate_;
  std::vector<RegressionTree> trees_;
  std::size_t input_dim_;
};

// Class-1 prevalence is clamped to [1e-6, 1 - 1e-6] before taking log-odds.
double gbt_prior_score(const std::vector<int>& labels);

// Each round fits a depth-limited least-squares tree to the residuals
// y - sigmoid(score), then replaces every leaf value with the one-step
// Newton estimate sum(r) / sum(p (1 - p)) over the leaf's rows. Single-class
// data yields a prior-only model.
GradientBoostedTreesModel gbt_train(const LabeledDataset& data, const GbtConfig& cfg);

}  // namespace copycat
