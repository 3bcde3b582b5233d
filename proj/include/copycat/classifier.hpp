#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "copycat/matrix.hpp"

namespace copycat {

// Trained classifier. Implementations are immutable after construction, so a
// single instance may serve predictions from many threads.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual int predict(std::span<const double> point) const = 0;
  virtual std::vector<int> predict_batch(const Matrix& points) const;

  virtual std::size_t input_dim() const = 0;
  virtual int class_count() const = 0;

  // Persistence tag ("lr", "cart", "gbt", "mlp", "pipeline").
  virtual std::string family() const = 0;
  // Family-specific parameters; throws for models that cannot be persisted.
  virtual nlohmann::json payload() const = 0;

 protected:
  void check_dim(std::span<const double> point) const;
};

using ClassifierPtr = std::shared_ptr<const Classifier>;

// Model document: {"family": ..., "version": 1, "payload": {...}}, plus an
// optional "feature_names" array.
nlohmann::json save_model(const Classifier& model, const std::vector<std::string>& feature_names = {});
ClassifierPtr load_model(const nlohmann::json& doc);
std::vector<std::string> model_feature_names(const nlohmann::json& doc);

}  // namespace copycat
