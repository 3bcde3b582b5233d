#include "copycat/logistic.hpp"

#include <cmath>

#include "copycat/error.hpp"

namespace copycat {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LogisticRegressionModel::LogisticRegressionModel(std::vector<double> weights, double bias)
    : weights_(std::move(weights)), bias_(bias) {
  for (double w : weights_)
    if (!std::isfinite(w)) throw Error("logistic regression weight is not finite");
  if (!std::isfinite(bias_)) throw Error("logistic regression bias is not finite");
}

double LogisticRegressionModel::decision(std::span<const double> point) const {
  check_dim(point);
  double z = bias_;
  for (std::size_t j = 0; j < weights_.size(); ++j) z += weights_[j] * point[j];
  return z;
}

double LogisticRegressionModel::predict_proba(std::span<const double> point) const {
  return sigmoid(decision(point));
}

int LogisticRegressionModel::predict(std::span<const double> point) const {
  return predict_proba(point) > 0.5 ? 1 : 0;
}

nlohmann::json LogisticRegressionModel::payload() const { return {{"weights", weights_}, {"bias", bias_}}; }

std::shared_ptr<const LogisticRegressionModel> LogisticRegressionModel::from_payload(const nlohmann::json& j) {
  return std::make_shared<LogisticRegressionModel>(j.at("weights").get<std::vector<double>>(),
                                                   j.at("bias").get<double>());
}

LrObjective lr_objective(std::span<const double> weights, double bias, const LabeledDataset& data,
                         double l2_penalty) {
  const std::size_t m = data.size();
  const std::size_t d = data.dim();
  if (weights.size() != d) throw Error("weight vector length != feature count");
  LrObjective out;
  out.grad_weights.assign(d, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto x = data.features.row(i);
    double z = bias;
    for (std::size_t j = 0; j < d; ++j) z += weights[j] * x[j];
    const double y = data.labels[i] == 1 ? 1.0 : 0.0;
    // log(1 + e^z) - y z, evaluated stably
    out.loss += (z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) - y * z;
    const double residual = sigmoid(z) - y;
    for (std::size_t j = 0; j < d; ++j) out.grad_weights[j] += residual * x[j];
    out.grad_bias += residual;
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  out.loss *= inv_m;
  out.grad_bias *= inv_m;
  double sq = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    out.grad_weights[j] = out.grad_weights[j] * inv_m + l2_penalty * weights[j];
    sq += weights[j] * weights[j];
  }
  out.loss += 0.5 * l2_penalty * sq;
  return out;
}

LogisticRegressionModel lr_train(const LabeledDataset& data, const LrConfig& cfg) {
  validate(cfg);
  data.validate();
  if (data.class_count != 2) throw Error("logistic regression requires exactly 2 classes");
  std::vector<double> w(data.dim(), 0.0);
  double b = 0.0;
  for (int it = 0; it < cfg.iterations; ++it) {
    const auto obj = lr_objective(w, b, data, cfg.l2_penalty);
    if (!std::isfinite(obj.loss))
      throw Error("logistic regression diverged at iteration " + std::to_string(it) +
                  "; reduce lr.learning_rate");
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= cfg.learning_rate * obj.grad_weights[j];
    b -= cfg.learning_rate * obj.grad_bias;
  }
  for (double v : w)
    if (!std::isfinite(v)) throw Error("logistic regression diverged; reduce lr.learning_rate");
  return LogisticRegressionModel(std::move(w), b);
}

}  // namespace copycat
