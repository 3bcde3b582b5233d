#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "copycat/classifier.hpp"

namespace copycat {

enum class TermKind { raw, sum, difference, product, square };

// One engineered output column: (expr(x) - shift) / scale, where expr combines
// input columns a and b according to kind (b unused for raw and square).
struct FeatureTerm {
  std::string name;
  TermKind kind = TermKind::raw;
  std::size_t a = 0;
  std::size_t b = 0;
  double shift = 0.0;
  double scale = 1.0;
};

// Serializable point-to-point feature transformation.
class FeatureMap {
 public:
  FeatureMap(std::size_t input_dim, std::vector<FeatureTerm> terms);

  static FeatureMap identity(std::size_t dim);
  static FeatureMap select(std::size_t input_dim, const std::vector<std::size_t>& columns);

  std::vector<double> apply(std::span<const double> point) const;
  Matrix apply(const Matrix& points) const;
  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return terms_.size(); }
  const std::vector<FeatureTerm>& terms() const { return terms_; }

  // Sets each term's shift/scale to the mean and population std of its raw
  // expression over `points` (scale 1 for constant outputs).
  FeatureMap standardized_on(const Matrix& points) const;

  nlohmann::json to_json() const;
  static FeatureMap from_json(const nlohmann::json& j);

 private:
  double raw_term(const FeatureTerm& t, std::span<const double> point) const;

  std::size_t input_dim_;
  std::vector<FeatureTerm> terms_;
};

using PointMap = std::function<std::vector<double>(std::span<const double>)>;

// predict(x) = inner.predict(map(x)); exposes the raw input dimension.
class PipelineClassifier final : public Classifier {
 public:
  PipelineClassifier(FeatureMap map, ClassifierPtr inner);
  // Arbitrary callable map; such pipelines cannot be persisted.
  PipelineClassifier(PointMap map, std::size_t input_dim, std::size_t output_dim, ClassifierPtr inner);

  int predict(std::span<const double> point) const override;
  std::size_t input_dim() const override { return input_dim_; }
  int class_count() const override { return inner_->class_count(); }
  std::string family() const override { return "pipeline"; }
  nlohmann::json payload() const override;
  static std::shared_ptr<const PipelineClassifier> from_payload(const nlohmann::json& j);

  const ClassifierPtr& inner() const { return inner_; }
  const std::optional<FeatureMap>& feature_map() const { return map_; }

 private:
  std::optional<FeatureMap> map_;
  PointMap fn_;
  std::size_t input_dim_;
  ClassifierPtr inner_;
};

std::shared_ptr<const PipelineClassifier> pipeline_classifier(FeatureMap map, ClassifierPtr inner);

}  // namespace copycat
