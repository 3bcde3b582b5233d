#pragma once

#include <vector>

#include "copycat/classifier.hpp"
#include "copycat/gbt.hpp"
#include "copycat/tree.hpp"

namespace copycat {

struct FeatureImportance {
  std::vector<double> values;  // nonnegative, sums to 1
  bool degenerate = false;     // no split had positive decrease; values are uniform
};

// Sum over splits of (node samples / root samples) * (impurity decrease),
// accumulated onto the split feature and normalized. Gini for classification
// trees, variance for the boosted regression trees (summed over all trees).
FeatureImportance impurity_feature_importance(const DecisionTreeModel& tree);
FeatureImportance impurity_feature_importance(const GradientBoostedTreesModel& model);
// Dispatches on the dynamic type; throws for non-tree models.
FeatureImportance impurity_feature_importance(const Classifier& model);

}  // namespace copycat
