#include "copycat/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "copycat/error.hpp"
#include "presort.hpp"

namespace copycat {

namespace {

using Int128 = __int128;

int argmax_label(const std::vector<std::uint64_t>& histogram) {
  int best = 0;
  for (std::size_t k = 1; k < histogram.size(); ++k)
    if (histogram[k] > histogram[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  return best;
}

double gini(const std::vector<std::uint64_t>& histogram, std::uint64_t n) {
  if (n == 0) return 0.0;
  double sum_sq = 0.0;
  for (auto c : histogram) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

// Walks a node array from the root, checking that every node is reached
// exactly once through well-formed child links.
template <typename Node>
void check_tree_structure(const std::vector<Node>& nodes, std::size_t input_dim) {
  if (nodes.empty()) throw Error("tree has no nodes");
  std::vector<std::uint8_t> seen(nodes.size(), 0);
  std::vector<std::size_t> stack{0};
  std::size_t visited = 0;
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    if (seen[id]) throw Error("tree node " + std::to_string(id) + " reached twice (cycle or shared child)");
    seen[id] = 1;
    ++visited;
    const Node& n = nodes[id];
    if (n.is_leaf()) continue;
    if (static_cast<std::size_t>(n.feature) >= input_dim)
      throw Error("tree node " + std::to_string(id) + " splits on out-of-range feature");
    if (!std::isfinite(n.threshold)) throw Error("tree node " + std::to_string(id) + " has non-finite threshold");
    for (int child : {n.left, n.right}) {
      if (child <= 0 || static_cast<std::size_t>(child) >= nodes.size())
        throw Error("tree node " + std::to_string(id) + " has invalid child index");
      stack.push_back(static_cast<std::size_t>(child));
    }
  }
  if (visited != nodes.size()) throw Error("tree has nodes unreachable from the root");
}

template <typename Node>
int route(const std::vector<Node>& nodes, std::span<const double> point) {
  std::size_t id = 0;
  while (!nodes[id].is_leaf()) {
    const Node& n = nodes[id];
    id = static_cast<std::size_t>(point[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return static_cast<int>(id);
}

struct PendingNode {
  std::size_t id;
  std::size_t lo;
  std::size_t hi;
  int depth;
};

}  // namespace

DecisionTreeModel::DecisionTreeModel(std::vector<ClassTreeNode> nodes, std::size_t input_dim, int class_count)
    : nodes_(std::move(nodes)), input_dim_(input_dim), class_count_(class_count) {
  if (class_count_ < 2) throw Error("decision tree needs class_count >= 2");
  check_tree_structure(nodes_, input_dim_);
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const auto& n = nodes_[id];
    if (n.histogram.size() != static_cast<std::size_t>(class_count_))
      throw Error("tree node " + std::to_string(id) + " histogram has wrong length");
    if (n.is_leaf() && n.label != argmax_label(n.histogram))
      throw Error("tree leaf " + std::to_string(id) + " label disagrees with its histogram");
  }
}

int DecisionTreeModel::leaf_index(std::span<const double> point) const {
  check_dim(point);
  return route(nodes_, point);
}

int DecisionTreeModel::predict(std::span<const double> point) const {
  return nodes_[static_cast<std::size_t>(leaf_index(point))].label;
}

int DecisionTreeModel::depth() const {
  int deepest = 0;
  std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [id, level] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, level);
    const auto& n = nodes_[id];
    if (!n.is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(n.left), level + 1);
      stack.emplace_back(static_cast<std::size_t>(n.right), level + 1);
    }
  }
  return deepest;
}

std::size_t DecisionTreeModel::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.is_leaf(); }));
}

nlohmann::json DecisionTreeModel::payload() const {
  nlohmann::json feature = nlohmann::json::array(), threshold = nlohmann::json::array(),
                 left = nlohmann::json::array(), right = nlohmann::json::array(),
                 histogram = nlohmann::json::array(), label = nlohmann::json::array(),
                 impurity = nlohmann::json::array(), samples = nlohmann::json::array();
  for (const auto& n : nodes_) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    histogram.push_back(n.histogram);
    label.push_back(n.label);
    impurity.push_back(n.impurity);
    samples.push_back(n.samples);
  }
  return {{"input_dim", input_dim_}, {"class_count", class_count_}, {"root", 0},
          {"feature", feature},      {"threshold", threshold},      {"left", left},
          {"right", right},          {"histogram", histogram},      {"label", label},
          {"impurity", impurity},    {"samples", samples}};
}

std::shared_ptr<const DecisionTreeModel> DecisionTreeModel::from_payload(const nlohmann::json& j) {
  if (j.value("root", 0) != 0) throw Error("tree root must be node 0");
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto histogram = j.at("histogram").get<std::vector<std::vector<std::uint64_t>>>();
  const auto label = j.at("label").get<std::vector<int>>();
  const auto impurity = j.at("impurity").get<std::vector<double>>();
  const auto samples = j.at("samples").get<std::vector<std::uint64_t>>();
  const std::size_t n = feature.size();
  for (std::size_t len : {threshold.size(), left.size(), right.size(), histogram.size(), label.size(),
                          impurity.size(), samples.size()})
    if (len != n) throw Error("tree payload arrays have inconsistent lengths");
  std::vector<ClassTreeNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i)
    nodes[i] = {feature[i], threshold[i], left[i], right[i], histogram[i], label[i], impurity[i], samples[i]};
  return std::make_shared<DecisionTreeModel>(std::move(nodes), j.at("input_dim").get<std::size_t>(),
                                             j.at("class_count").get<int>());
}

DecisionTreeModel cart_train(const LabeledDataset& data, const CartConfig& cfg) {
  validate(cfg);
  data.validate();
  const std::size_t m = data.size();
  const std::size_t d = data.dim();
  const auto k_classes = static_cast<std::size_t>(data.class_count);
  const auto& x = data.features;
  const auto& y = data.labels;

  detail::PresortedColumns columns(x);
  std::vector<std::uint8_t> goes_left(m, 0);
  std::vector<ClassTreeNode> nodes(1);
  std::vector<PendingNode> stack{{0, 0, m, 0}};
  std::vector<std::int64_t> left_counts(k_classes);

  while (!stack.empty()) {
    const PendingNode task = stack.back();
    stack.pop_back();
    const std::size_t n = task.hi - task.lo;

    std::vector<std::uint64_t> histogram(k_classes, 0);
    for (std::uint32_t i : columns.order(0, task.lo, task.hi)) ++histogram[static_cast<std::size_t>(y[i])];
    {
      auto& node = nodes[task.id];
      node.histogram = histogram;
      node.label = argmax_label(histogram);
      node.samples = n;
      node.impurity = gini(histogram, n);
    }

    const bool pure = std::count_if(histogram.begin(), histogram.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || n < static_cast<std::size_t>(cfg.min_samples_split) || (cfg.max_depth && task.depth >= *cfg.max_depth))
      continue;

    Int128 total_sq = 0;
    for (auto c : histogram) total_sq += static_cast<Int128>(c) * static_cast<Int128>(c);

    // Score of a split: sum_k L_k^2 / nL + sum_k R_k^2 / nR, compared exactly as
    // the fraction (sqL * nR + sqR * nL) / (nL * nR).
    bool found = false;
    int best_feature = -1;
    double best_threshold = 0.0;
    Int128 best_num = 0;
    Int128 best_den = 1;
    std::size_t best_left = 0;
    for (std::size_t f = 0; f < d; ++f) {
      const auto order = columns.order(f, task.lo, task.hi);
      std::fill(left_counts.begin(), left_counts.end(), 0);
      Int128 sq_left = 0;
      Int128 sq_right = total_sq;
      for (std::size_t p = 0; p + 1 < n; ++p) {
        const std::uint32_t i = order[p];
        const auto c = static_cast<std::size_t>(y[i]);
        const std::int64_t lc = left_counts[c];
        const std::int64_t rc = static_cast<std::int64_t>(histogram[c]) - lc;
        sq_left += 2 * lc + 1;
        sq_right -= 2 * rc - 1;
        left_counts[c] = lc + 1;
        const double v = x(i, f);
        const double v_next = x(order[p + 1], f);
        if (!(v < v_next)) continue;
        const auto n_left = static_cast<Int128>(p + 1);
        const auto n_right = static_cast<Int128>(n - p - 1);
        const Int128 num = sq_left * n_right + sq_right * n_left;
        const Int128 den = n_left * n_right;
        if (!found || num * best_den > best_num * den) {
          found = true;
          best_num = num;
          best_den = den;
          best_feature = static_cast<int>(f);
          best_threshold = detail::split_threshold(v, v_next);
          best_left = p + 1;
        }
      }
    }
    if (!found) continue;

    for (std::uint32_t i : columns.order(0, task.lo, task.hi))
      goes_left[i] = x(i, static_cast<std::size_t>(best_feature)) <= best_threshold ? 1 : 0;
    columns.partition(task.lo, task.hi, goes_left);

    const std::size_t left_id = nodes.size();
    nodes.emplace_back();
    nodes.emplace_back();
    auto& node = nodes[task.id];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = static_cast<int>(left_id);
    node.right = static_cast<int>(left_id + 1);
    const std::size_t mid = task.lo + best_left;
    stack.push_back({left_id + 1, mid, task.hi, task.depth + 1});
    stack.push_back({left_id, task.lo, mid, task.depth + 1});
  }
  return DecisionTreeModel(std::move(nodes), d, data.class_count);
}

RegressionTree::RegressionTree(std::vector<RegressionTreeNode> nodes) : nodes_(std::move(nodes)) {}

int RegressionTree::leaf_index(std::span<const double> point) const { return route(nodes_, point); }

nlohmann::json RegressionTree::to_json() const {
  nlohmann::json feature = nlohmann::json::array(), threshold = nlohmann::json::array(),
                 left = nlohmann::json::array(), right = nlohmann::json::array(),
                 value = nlohmann::json::array(), impurity = nlohmann::json::array(),
                 samples = nlohmann::json::array();
  for (const auto& n : nodes_) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    impurity.push_back(n.impurity);
    samples.push_back(n.samples);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},       {"right", right},
          {"value", value},     {"impurity", impurity},   {"samples", samples}};
}

RegressionTree RegressionTree::from_json(const nlohmann::json& j, std::size_t input_dim) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  const auto impurity = j.at("impurity").get<std::vector<double>>();
  const auto samples = j.at("samples").get<std::vector<std::uint64_t>>();
  const std::size_t n = feature.size();
  for (std::size_t len : {threshold.size(), left.size(), right.size(), value.size(), impurity.size(), samples.size()})
    if (len != n) throw Error("regression tree arrays have inconsistent lengths");
  std::vector<RegressionTreeNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i)
    nodes[i] = {feature[i], threshold[i], left[i], right[i], value[i], impurity[i], samples[i]};
  check_tree_structure(nodes, input_dim);
  return RegressionTree(std::move(nodes));
}

RegressionFit fit_regression_tree(const Matrix& x, std::span<const double> targets, int max_depth,
                                  int min_samples_split) {
  const std::size_t m = x.rows();
  const std::size_t d = x.cols();
  if (m == 0) throw Error("cannot fit a regression tree on zero rows");
  if (targets.size() != m) throw Error("regression targets length != rows");

  detail::PresortedColumns columns(x);
  std::vector<std::uint8_t> goes_left(m, 0);
  std::vector<RegressionTreeNode> nodes(1);
  std::vector<PendingNode> stack{{0, 0, m, 0}};
  RegressionFit fit;
  fit.leaf_of_sample.assign(m, 0);

  while (!stack.empty()) {
    const PendingNode task = stack.back();
    stack.pop_back();
    const std::size_t n = task.hi - task.lo;
    const auto rows = columns.order(0, task.lo, task.hi);

    double sum = 0.0;
    for (std::uint32_t i : rows) sum += targets[i];
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::uint32_t i : rows) sq += (targets[i] - mean) * (targets[i] - mean);
    {
      auto& node = nodes[task.id];
      node.value = mean;
      node.samples = n;
      node.impurity = sq / static_cast<double>(n);
    }

    auto make_leaf = [&] {
      for (std::uint32_t i : columns.order(0, task.lo, task.hi)) fit.leaf_of_sample[i] = static_cast<int>(task.id);
    };
    if (n < static_cast<std::size_t>(min_samples_split) || task.depth >= max_depth || !(sq > 0.0)) {
      make_leaf();
      continue;
    }

    // Maximize sL^2/nL + sR^2/nR; must beat the parent's s^2/n.
    const double parent_score = sum * sum / static_cast<double>(n);
    const double min_gain = 1e-12 * std::max(1.0, sq);
    bool found = false;
    double best_score = parent_score + min_gain;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::size_t best_left = 0;
    for (std::size_t f = 0; f < d; ++f) {
      const auto order = columns.order(f, task.lo, task.hi);
      double sum_left = 0.0;
      for (std::size_t p = 0; p + 1 < n; ++p) {
        const std::uint32_t i = order[p];
        sum_left += targets[i];
        const double v = x(i, f);
        const double v_next = x(order[p + 1], f);
        if (!(v < v_next)) continue;
        const double n_left = static_cast<double>(p + 1);
        const double n_right = static_cast<double>(n - p - 1);
        const double sum_right = sum - sum_left;
        const double score = sum_left * sum_left / n_left + sum_right * sum_right / n_right;
        if (score > best_score) {
          found = true;
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = detail::split_threshold(v, v_next);
          best_left = p + 1;
        }
      }
    }
    if (!found) {
      make_leaf();
      continue;
    }

    for (std::uint32_t i : columns.order(0, task.lo, task.hi))
      goes_left[i] = x(i, static_cast<std::size_t>(best_feature)) <= best_threshold ? 1 : 0;
    columns.partition(task.lo, task.hi, goes_left);

    const std::size_t left_id = nodes.size();
    nodes.emplace_back();
    nodes.emplace_back();
    auto& node = nodes[task.id];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = static_cast<int>(left_id);
    node.right = static_cast<int>(left_id + 1);
    const std::size_t mid = task.lo + best_left;
    stack.push_back({left_id + 1, mid, task.hi, task.depth + 1});
    stack.push_back({left_id, task.lo, mid, task.depth + 1});
  }
  fit.tree = RegressionTree(std::move(nodes));
  return fit;
}

}  // namespace copycat
