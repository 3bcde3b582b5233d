#include "copycat/classifier.hpp"

#include "copycat/error.hpp"
#include "copycat/gbt.hpp"
#include "copycat/logistic.hpp"
#include "copycat/mlp.hpp"
#include "copycat/pipeline.hpp"
#include "copycat/tree.hpp"

namespace copycat {

std::vector<int> Classifier::predict_batch(const Matrix& points) const {
  if (points.cols() != input_dim())
    throw Error("model expects " + std::to_string(input_dim()) + " features, got " + std::to_string(points.cols()));
  std::vector<int> out(points.rows());
  for (std::size_t r = 0; r < points.rows(); ++r) out[r] = predict(points.row(r));
  return out;
}

void Classifier::check_dim(std::span<const double> point) const {
  if (point.size() != input_dim())
    throw Error(family() + " model expects " + std::to_string(input_dim()) + " features, got " +
                std::to_string(point.size()));
}

nlohmann::json save_model(const Classifier& model, const std::vector<std::string>& feature_names) {
  nlohmann::json doc = {{"family", model.family()}, {"version", 1}, {"payload", model.payload()}};
  if (!feature_names.empty()) {
    if (feature_names.size() != model.input_dim()) throw Error("feature name count != model input dimension");
    doc["feature_names"] = feature_names;
  }
  return doc;
}

ClassifierPtr load_model(const nlohmann::json& doc) {
  try {
    const int version = doc.at("version").get<int>();
    if (version != 1) throw Error("unsupported model version " + std::to_string(version));
    const auto family = doc.at("family").get<std::string>();
    const auto& payload = doc.at("payload");
    if (family == "lr") return LogisticRegressionModel::from_payload(payload);
    if (family == "cart") return DecisionTreeModel::from_payload(payload);
    if (family == "gbt") return GradientBoostedTreesModel::from_payload(payload);
    if (family == "mlp") return MlpModel::from_payload(payload);
    if (family == "pipeline") return PipelineClassifier::from_payload(payload);
    throw Error("unknown model family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model document: ") + e.what());
  }
}

std::vector<std::string> model_feature_names(const nlohmann::json& doc) {
  if (!doc.contains("feature_names")) return {};
  return doc.at("feature_names").get<std::vector<std::string>>();
}

}  // namespace copycat
