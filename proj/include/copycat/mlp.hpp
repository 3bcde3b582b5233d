#pragma once

#include <vector>

#include "copycat/classifier.hpp"
#include "copycat/data.hpp"
#include "copycat/train_config.hpp"

namespace copycat {

struct MlpLayer {
  Matrix weights;  // outputs x inputs
  std::vector<double> bias;

  bool operator==(const MlpLayer&) const = default;
};

// Feed-forward network: rectifier hidden layers, softmax output over K classes.
class MlpModel final : public Classifier {
 public:
  MlpModel(std::vector<MlpLayer> layers);

  std::vector<double> predict_proba(std::span<const double> point) const;
  int predict(std::span<const double> point) const override;
  std::size_t input_dim() const override { return layers_.front().weights.cols(); }
  int class_count() const override { return static_cast<int>(layers_.back().weights.rows()); }
  std::string family() const override { return "mlp"; }
  nlohmann::json payload() const override;
  static std::shared_ptr<const MlpModel> from_payload(const nlohmann::json& j);

  const std::vector<MlpLayer>& layers() const { return layers_; }

 private:
  std::vector<MlpLayer> layers_;
};

struct MlpObjective {
  double loss = 0.0;               // mean cross-entropy
  std::vector<MlpLayer> gradient;  // same shapes as the parameters
};

// Loss and backpropagated gradient over the given rows (all rows if empty).
MlpObjective mlp_objective(const std::vector<MlpLayer>& layers, const LabeledDataset& data,
                           std::span<const std::size_t> rows = {});

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
std::vector<MlpLayer> mlp_init(std::size_t input_dim, const std::vector<int>& hidden_sizes, int classes,
                               std::uint64_t seed);

// Mini-batch SGD on cross-entropy with a seeded per-epoch shuffle.
MlpModel mlp_train(const LabeledDataset& data, const MlpConfig& cfg);

}  // namespace copycat
