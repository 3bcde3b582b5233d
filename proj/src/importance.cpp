#include "copycat/importance.hpp"

#include <numeric>

#include "copycat/error.hpp"

namespace copycat {

namespace {

template <typename Node>
void accumulate(const std::vector<Node>& nodes, std::vector<double>& totals) {
  const double root = static_cast<double>(nodes.front().samples);
  if (!(root > 0.0)) return;
  for (const auto& n : nodes) {
    if (n.is_leaf()) continue;
    const auto& l = nodes[static_cast<std::size_t>(n.left)];
    const auto& r = nodes[static_cast<std::size_t>(n.right)];
    const double decrease = static_cast<double>(n.samples) * n.impurity - static_cast<double>(l.samples) * l.impurity -
                            static_cast<double>(r.samples) * r.impurity;
    if (decrease > 0.0) totals[static_cast<std::size_t>(n.feature)] += decrease / root;
  }
}

FeatureImportance normalize(std::vector<double> totals) {
  FeatureImportance out;
  const double sum = std::accumulate(totals.begin(), totals.end(), 0.0);
  if (!(sum > 0.0)) {
    out.degenerate = true;
    out.values.assign(totals.size(), totals.empty() ? 0.0 : 1.0 / static_cast<double>(totals.size()));
    return out;
  }
  for (double& v : totals) v /= sum;
  out.values = std::move(totals);
  return out;
}

}  // namespace

FeatureImportance impurity_feature_importance(const DecisionTreeModel& tree) {
  std::vector<double> totals(tree.input_dim(), 0.0);
  accumulate(tree.nodes(), totals);
  return normalize(std::move(totals));
}

FeatureImportance impurity_feature_importance(const GradientBoostedTreesModel& model) {
  std::vector<double> totals(model.input_dim(), 0.0);
  for (const auto& t : model.trees()) accumulate(t.nodes(), totals);
  return normalize(std::move(totals));
}

FeatureImportance impurity_feature_importance(const Classifier& model) {
  if (const auto* tree = dynamic_cast<const DecisionTreeModel*>(&model)) return impurity_feature_importance(*tree);
  if (const auto* gbt = dynamic_cast<const GradientBoostedTreesModel*>(&model)) return impurity_feature_importance(*gbt);
  throw Error("importance requires tree model (got '" + model.family() + "')");
}

}  // namespace copycat
