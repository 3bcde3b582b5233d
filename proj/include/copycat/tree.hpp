#pragma once

#include <cstdint>
#include <vector>

#include "copycat/classifier.hpp"
#include "copycat/data.hpp"
#include "copycat/train_config.hpp"

namespace copycat {

// Classification tree node. Internal nodes have feature >= 0 and both
// children; leaves have feature == -1. Inputs with x[feature] <= threshold
// route left.
struct ClassTreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<std::uint64_t> histogram;  // training samples per class
  int label = 0;                          // argmax of histogram, lowest index on ties
  double impurity = 0.0;                  // Gini
  std::uint64_t samples = 0;

  bool is_leaf() const { return feature < 0; }
};

class DecisionTreeModel final : public Classifier {
 public:
  // Validates structure: root 0, acyclic, every node reachable, leaf labels
  // consistent with their histograms.
  DecisionTreeModel(std::vector<ClassTreeNode> nodes, std::size_t input_dim, int class_count);

  int predict(std::span<const double> point) const override;
  std::size_t input_dim() const override { return input_dim_; }
  int class_count() const override { return class_count_; }
  std::string family() const override { return "cart"; }
  nlohmann::json payload() const override;
  static std::shared_ptr<const DecisionTreeModel> from_payload(const nlohmann::json& j);

  const std::vector<ClassTreeNode>& nodes() const { return nodes_; }
  int leaf_index(std::span<const double> point) const;
  // Edges on the longest root-to-leaf path (single leaf: 0).
  int depth() const;
  std::size_t leaf_count() const;

 private:
  std::vector<ClassTreeNode> nodes_;
  std::size_t input_dim_;
  int class_count_;
};

// Greedy CART with Gini impurity. Candidate thresholds are midpoints between
// consecutive distinct values; the best split maximizes impurity decrease,
// ties going to the lowest feature index and then the lowest threshold. A
// node becomes a leaf when pure, smaller than min_samples_split, at
// max_depth, or when no feature separates its samples.
DecisionTreeModel cart_train(const LabeledDataset& data, const CartConfig& cfg);

// Regression tree used inside gradient boosting. Leaves carry real values.
struct RegressionTreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  double impurity = 0.0;  // variance of the fitted targets
  std::uint64_t samples = 0;

  bool is_leaf() const { return feature < 0; }
};

class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<RegressionTreeNode> nodes);

  double evaluate(std::span<const double> point) const { return nodes_[static_cast<std::size_t>(leaf_index(point))].value; }
  int leaf_index(std::span<const double> point) const;
  const std::vector<RegressionTreeNode>& nodes() const { return nodes_; }
  std::vector<RegressionTreeNode>& mutable_nodes() { return nodes_; }

  nlohmann::json to_json() const;
  static RegressionTree from_json(const nlohmann::json& j, std::size_t input_dim);

 private:
  std::vector<RegressionTreeNode> nodes_;
};

struct RegressionFit {
  RegressionTree tree;
  std::vector<int> leaf_of_sample;  // node index reached by each training row
};

// Least-squares regression tree of bounded depth on `targets`.
RegressionFit fit_regression_tree(const Matrix& features, std::span<const double> targets, int max_depth,
                                  int min_samples_split = 2);

}  // namespace copycat
