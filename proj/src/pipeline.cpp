#include "copycat/pipeline.hpp"

#include <cmath>

#include "copycat/error.hpp"

namespace copycat {

namespace {

const char* kind_name(TermKind k) {
  switch (k) {
    case TermKind::raw: return "raw";
    case TermKind::sum: return "sum";
    case TermKind::difference: return "difference";
    case TermKind::product: return "product";
    case TermKind::square: return "square";
  }
  return "raw";
}

TermKind kind_from_name(const std::string& s) {
  for (auto k : {TermKind::raw, TermKind::sum, TermKind::difference, TermKind::product, TermKind::square})
    if (s == kind_name(k)) return k;
  throw Error("unknown feature term kind '" + s + "'");
}

}  // namespace

FeatureMap::FeatureMap(std::size_t input_dim, std::vector<FeatureTerm> terms)
    : input_dim_(input_dim), terms_(std::move(terms)) {
  if (terms_.empty()) throw Error("feature map has no output terms");
  for (const auto& t : terms_) {
    if (t.a >= input_dim_ || t.b >= input_dim_)
      throw Error("feature term '" + t.name + "' references a column beyond input dimension " +
                  std::to_string(input_dim_));
    if (!(t.scale > 0.0) || !std::isfinite(t.scale) || !std::isfinite(t.shift))
      throw Error("feature term '" + t.name + "' needs a positive finite scale");
  }
}

FeatureMap FeatureMap::identity(std::size_t dim) {
  std::vector<FeatureTerm> terms;
  for (std::size_t j = 0; j < dim; ++j) terms.push_back({"x" + std::to_string(j), TermKind::raw, j, j, 0.0, 1.0});
  return FeatureMap(dim, std::move(terms));
}

FeatureMap FeatureMap::select(std::size_t input_dim, const std::vector<std::size_t>& columns) {
  std::vector<FeatureTerm> terms;
  for (std::size_t c : columns) terms.push_back({"x" + std::to_string(c), TermKind::raw, c, c, 0.0, 1.0});
  return FeatureMap(input_dim, std::move(terms));
}

double FeatureMap::raw_term(const FeatureTerm& t, std::span<const double> x) const {
  switch (t.kind) {
    case TermKind::raw: return x[t.a];
    case TermKind::sum: return x[t.a] + x[t.b];
    case TermKind::difference: return x[t.a] - x[t.b];
    case TermKind::product: return x[t.a] * x[t.b];
    case TermKind::square: return x[t.a] * x[t.a];
  }
  return 0.0;
}

std::vector<double> FeatureMap::apply(std::span<const double> point) const {
  if (point.size() != input_dim_)
    throw Error("feature map expects " + std::to_string(input_dim_) + " inputs, got " + std::to_string(point.size()));
  std::vector<double> out(terms_.size());
  for (std::size_t k = 0; k < terms_.size(); ++k) out[k] = (raw_term(terms_[k], point) - terms_[k].shift) / terms_[k].scale;
  return out;
}

Matrix FeatureMap::apply(const Matrix& points) const {
  Matrix out(points.rows(), output_dim());
  for (std::size_t r = 0; r < points.rows(); ++r) {
    const auto v = apply(points.row(r));
    std::copy(v.begin(), v.end(), out.row(r).begin());
  }
  return out;
}

FeatureMap FeatureMap::standardized_on(const Matrix& points) const {
  if (points.rows() == 0) throw Error("cannot standardize a feature map on zero rows");
  auto terms = terms_;
  const double m = static_cast<double>(points.rows());
  for (auto& t : terms) {
    double sum = 0.0;
    for (std::size_t r = 0; r < points.rows(); ++r) sum += raw_term(t, points.row(r));
    const double mean = sum / m;
    double sq = 0.0;
    for (std::size_t r = 0; r < points.rows(); ++r) {
      const double dev = raw_term(t, points.row(r)) - mean;
      sq += dev * dev;
    }
    const double sd = std::sqrt(sq / m);
    t.shift = mean;
    t.scale = sd > 0.0 ? sd : 1.0;
  }
  return FeatureMap(input_dim_, std::move(terms));
}

nlohmann::json FeatureMap::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_)
    terms.push_back({{"name", t.name}, {"kind", kind_name(t.kind)}, {"a", t.a}, {"b", t.b},
                     {"shift", t.shift}, {"scale", t.scale}});
  return {{"input_dim", input_dim_}, {"terms", terms}};
}

FeatureMap FeatureMap::from_json(const nlohmann::json& j) {
  std::vector<FeatureTerm> terms;
  for (const auto& t : j.at("terms")) {
    terms.push_back({t.at("name").get<std::string>(), kind_from_name(t.at("kind").get<std::string>()),
                     t.at("a").get<std::size_t>(), t.at("b").get<std::size_t>(), t.at("shift").get<double>(),
                     t.at("scale").get<double>()});
  }
  return FeatureMap(j.at("input_dim").get<std::size_t>(), std::move(terms));
}

PipelineClassifier::PipelineClassifier(FeatureMap map, ClassifierPtr inner)
    : map_(std::move(map)), input_dim_(map_->input_dim()), inner_(std::move(inner)) {
  if (!inner_) throw Error("pipeline needs an inner classifier");
  if (map_->output_dim() != inner_->input_dim())
    throw Error("feature map produces " + std::to_string(map_->output_dim()) + " features, inner model expects " +
                std::to_string(inner_->input_dim()));
}

PipelineClassifier::PipelineClassifier(PointMap map, std::size_t input_dim, std::size_t output_dim, ClassifierPtr inner)
    : fn_(std::move(map)), input_dim_(input_dim), inner_(std::move(inner)) {
  if (!inner_) throw Error("pipeline needs an inner classifier");
  if (!fn_) throw Error("pipeline needs a feature map");
  if (output_dim != inner_->input_dim())
    throw Error("feature map produces " + std::to_string(output_dim) + " features, inner model expects " +
                std::to_string(inner_->input_dim()));
}

int PipelineClassifier::predict(std::span<const double> point) const {
  check_dim(point);
  const auto mapped = map_ ? map_->apply(point) : fn_(point);
  return inner_->predict(mapped);
}

nlohmann::json PipelineClassifier::payload() const {
  if (!map_) throw Error("pipeline with a callable feature map cannot be saved");
  return {{"feature_map", map_->to_json()}, {"inner", save_model(*inner_)}};
}

std::shared_ptr<const PipelineClassifier> PipelineClassifier::from_payload(const nlohmann::json& j) {
  return std::make_shared<PipelineClassifier>(FeatureMap::from_json(j.at("feature_map")), load_model(j.at("inner")));
}

std::shared_ptr<const PipelineClassifier> pipeline_classifier(FeatureMap map, ClassifierPtr inner) {
  return std::make_shared<PipelineClassifier>(std::move(map), std::move(inner));
}

}  // namespace copycat
