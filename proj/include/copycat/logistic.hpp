#pragma once

#include <vector>

#include "copycat/classifier.hpp"
#include "copycat/data.hpp"
#include "copycat/train_config.hpp"

namespace copycat {

// Binary logistic regression: P(class 1 | x) = sigmoid(w.x + b).
class LogisticRegressionModel final : public Classifier {
 public:
  LogisticRegressionModel(std::vector<double> weights, double bias);

  double predict_proba(std::span<const double> point) const;
  double decision(std::span<const double> point) const;
  // Class 1 iff probability > 0.5.
  int predict(std::span<const double> point) const override;

  std::size_t input_dim() const override { return weights_.size(); }
  int class_count() const override { return 2; }
  std::string family() const override { return "lr"; }
  nlohmann::json payload() const override;
  static std::shared_ptr<const LogisticRegressionModel> from_payload(const nlohmann::json& j);

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  std::vector<double> weights_;
  double bias_;
};

double sigmoid(double z);

struct LrObjective {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

// Mean logistic loss + l2_penalty * |w|^2 / 2 and its gradient.
LrObjective lr_objective(std::span<const double> weights, double bias, const LabeledDataset& data,
                         double l2_penalty);

// Full-batch gradient descent from zero for a fixed number of iterations.
LogisticRegressionModel lr_train(const LabeledDataset& data, const LrConfig& cfg);

}  // namespace copycat
