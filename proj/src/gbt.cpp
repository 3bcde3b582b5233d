#include "copycat/gbt.hpp"

#include <algorithm>
#include <cmath>

#include "copycat/error.hpp"
#include "copycat/logistic.hpp"

namespace copycat {

GradientBoostedTreesModel::GradientBoostedTreesModel(double initial_score, double learning_rate,
                                                     std::vector<RegressionTree> trees, std::size_t input_dim)
    : initial_score_(initial_score), learning_rate_(learning_rate), trees_(std::move(trees)), input_dim_(input_dim) {
  if (!std::isfinite(initial_score_)) throw Error("gbt initial score is not finite");
  if (!(learning_rate_ > 0.0 && learning_rate_ <= 1.0)) throw Error("gbt learning rate must lie in (0, 1]");
}

double GradientBoostedTreesModel::score(std::span<const double> point) const {
  check_dim(point);
  double sum = 0.0;
  for (const auto& tree : trees_) sum += tree.evaluate(point);
  return initial_score_ + learning_rate_ * sum;
}

int GradientBoostedTreesModel::predict(std::span<const double> point) const { return score(point) > 0.0 ? 1 : 0; }

nlohmann::json GradientBoostedTreesModel::payload() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"input_dim", input_dim_},
          {"initial_score", initial_score_},
          {"learning_rate", learning_rate_},
          {"trees", trees}};
}

std::shared_ptr<const GradientBoostedTreesModel> GradientBoostedTreesModel::from_payload(const nlohmann::json& j) {
  const auto input_dim = j.at("input_dim").get<std::size_t>();
  std::vector<RegressionTree> trees;
  for (const auto& t : j.at("trees")) trees.push_back(RegressionTree::from_json(t, input_dim));
  return std::make_shared<GradientBoostedTreesModel>(j.at("initial_score").get<double>(),
                                                     j.at("learning_rate").get<double>(), std::move(trees),
                                                     input_dim);
}

double gbt_prior_score(const std::vector<int>& labels) {
  if (labels.empty()) throw Error("cannot compute a prior from zero labels");
  const double positives = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double p = std::clamp(positives / static_cast<double>(labels.size()), 1e-6, 1.0 - 1e-6);
  return std::log(p / (1.0 - p));
}

GradientBoostedTreesModel gbt_train(const LabeledDataset& data, const GbtConfig& cfg) {
  validate(cfg);
  data.validate();
  if (data.class_count != 2) throw Error("gradient boosting supports exactly 2 classes");
  const std::size_t m = data.size();
  const double prior = gbt_prior_score(data.labels);
  const auto counts = data.class_counts();
  if (counts[0] == 0 || counts[1] == 0) return GradientBoostedTreesModel(prior, cfg.learning_rate, {}, data.dim());

  std::vector<double> scores(m, prior);
  std::vector<double> residuals(m);
  std::vector<double> hessians(m);
  std::vector<RegressionTree> trees;
  trees.reserve(static_cast<std::size_t>(cfg.rounds));
  for (int round = 0; round < cfg.rounds; ++round) {
    for (std::size_t i = 0; i < m; ++i) {
      const double p = sigmoid(scores[i]);
      residuals[i] = (data.labels[i] == 1 ? 1.0 : 0.0) - p;
      hessians[i] = p * (1.0 - p);
    }
    auto fit = fit_regression_tree(data.features, residuals, cfg.tree_depth);
    auto& nodes = fit.tree.mutable_nodes();
    std::vector<double> num(nodes.size(), 0.0);
    std::vector<double> den(nodes.size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const auto leaf = static_cast<std::size_t>(fit.leaf_of_sample[i]);
      num[leaf] += residuals[i];
      den[leaf] += hessians[i];
    }
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      if (!nodes[id].is_leaf()) continue;
      nodes[id].value = std::abs(den[id]) < 1e-150 ? 0.0 : num[id] / den[id];
    }
    for (std::size_t i = 0; i < m; ++i)
      scores[i] += cfg.learning_rate * nodes[static_cast<std::size_t>(fit.leaf_of_sample[i])].value;
    trees.push_back(std::move(fit.tree));
  }
  return GradientBoostedTreesModel(prior, cfg.learning_rate, std::move(trees), data.dim());
}

}  // namespace copycat
