#include "copycat/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "copycat/error.hpp"
#include "copycat/random.hpp"

namespace copycat {

namespace {

void check_layers(const std::vector<MlpLayer>& layers) {
  if (layers.size() < 2) throw Error("mlp needs at least one hidden layer");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.weights.rows() == 0 || layer.weights.cols() == 0) throw Error("mlp layer has zero size");
    if (layer.bias.size() != layer.weights.rows()) throw Error("mlp bias length != layer width");
    if (l > 0 && layer.weights.cols() != layers[l - 1].weights.rows())
      throw Error("mlp layer " + std::to_string(l) + " input width does not chain");
    for (double v : layer.weights.values())
      if (!std::isfinite(v)) throw Error("mlp weight is not finite");
    for (double v : layer.bias)
      if (!std::isfinite(v)) throw Error("mlp bias is not finite");
  }
  if (layers.back().weights.rows() < 2) throw Error("mlp output must have >= 2 classes");
}

// Activations per layer; the last entry holds softmax probabilities.
std::vector<std::vector<double>> forward(const std::vector<MlpLayer>& layers, std::span<const double> x) {
  std::vector<std::vector<double>> acts;
  acts.reserve(layers.size() + 1);
  acts.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    const auto& in = acts.back();
    std::vector<double> out(layer.bias);
    for (std::size_t o = 0; o < out.size(); ++o) {
      const auto w = layer.weights.row(o);
      for (std::size_t i = 0; i < in.size(); ++i) out[o] += w[i] * in[i];
    }
    if (l + 1 < layers.size()) {
      for (double& v : out) v = std::max(0.0, v);
    } else {
      const double peak = *std::max_element(out.begin(), out.end());
      double total = 0.0;
      for (double& v : out) {
        v = std::exp(v - peak);
        total += v;
      }
      for (double& v : out) v /= total;
    }
    acts.push_back(std::move(out));
  }
  return acts;
}

std::vector<MlpLayer> zeros_like(const std::vector<MlpLayer>& layers) {
  std::vector<MlpLayer> out;
  out.reserve(layers.size());
  for (const auto& l : layers)
    out.push_back({Matrix(l.weights.rows(), l.weights.cols()), std::vector<double>(l.bias.size(), 0.0)});
  return out;
}

}  // namespace

MlpModel::MlpModel(std::vector<MlpLayer> layers) : layers_(std::move(layers)) { check_layers(layers_); }

std::vector<double> MlpModel::predict_proba(std::span<const double> point) const {
  check_dim(point);
  return forward(layers_, point).back();
}

int MlpModel::predict(std::span<const double> point) const {
  const auto p = predict_proba(point);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

nlohmann::json MlpModel::payload() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : layers_) {
    layers.push_back({{"rows", l.weights.rows()},
                      {"cols", l.weights.cols()},
                      {"weights", std::vector<double>(l.weights.values().begin(), l.weights.values().end())},
                      {"bias", l.bias}});
  }
  return {{"activation", "relu"}, {"output", "softmax"}, {"layers", layers}};
}

std::shared_ptr<const MlpModel> MlpModel::from_payload(const nlohmann::json& j) {
  std::vector<MlpLayer> layers;
  for (const auto& l : j.at("layers")) {
    const auto rows = l.at("rows").get<std::size_t>();
    const auto cols = l.at("cols").get<std::size_t>();
    const auto w = l.at("weights").get<std::vector<double>>();
    if (w.size() != rows * cols) throw Error("mlp layer weight count != rows * cols");
    MlpLayer layer{Matrix(rows, cols), l.at("bias").get<std::vector<double>>()};
    std::copy(w.begin(), w.end(), layer.weights.values().begin());
    layers.push_back(std::move(layer));
  }
  return std::make_shared<MlpModel>(std::move(layers));
}

MlpObjective mlp_objective(const std::vector<MlpLayer>& layers, const LabeledDataset& data,
                           std::span<const std::size_t> rows) {
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    rows = all;
  }
  MlpObjective out;
  out.gradient = zeros_like(layers);
  for (std::size_t r : rows) {
    const auto acts = forward(layers, data.features.row(r));
    const auto label = static_cast<std::size_t>(data.labels[r]);
    const auto& probs = acts.back();
    out.loss -= std::log(std::max(probs[label], 1e-300));
    // dL/dz at the softmax input
    std::vector<double> delta(probs);
    delta[label] -= 1.0;
    for (std::size_t l = layers.size(); l-- > 0;) {
      const auto& in = acts[l];
      auto& g = out.gradient[l];
      for (std::size_t o = 0; o < delta.size(); ++o) {
        auto grow = g.weights.row(o);
        for (std::size_t i = 0; i < in.size(); ++i) grow[i] += delta[o] * in[i];
        g.bias[o] += delta[o];
      }
      if (l == 0) break;
      std::vector<double> prev(in.size(), 0.0);
      for (std::size_t o = 0; o < delta.size(); ++o) {
        const auto w = layers[l].weights.row(o);
        for (std::size_t i = 0; i < in.size(); ++i) prev[i] += w[i] * delta[o];
      }
      for (std::size_t i = 0; i < prev.size(); ++i)
        if (!(in[i] > 0.0)) prev[i] = 0.0;
      delta = std::move(prev);
    }
  }
  const double scale = 1.0 / static_cast<double>(rows.size());
  out.loss *= scale;
  for (auto& g : out.gradient) {
    for (double& v : g.weights.values()) v *= scale;
    for (double& v : g.bias) v *= scale;
  }
  return out;
}

std::vector<MlpLayer> mlp_init(std::size_t input_dim, const std::vector<int>& hidden_sizes, int classes,
                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<MlpLayer> layers;
  std::size_t fan_in = input_dim;
  std::vector<std::size_t> widths(hidden_sizes.begin(), hidden_sizes.end());
  widths.push_back(static_cast<std::size_t>(classes));
  for (std::size_t width : widths) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    MlpLayer layer{Matrix(width, fan_in), std::vector<double>(width, 0.0)};
    for (double& w : layer.weights.values()) w = rng.uniform(-bound, bound);
    layers.push_back(std::move(layer));
    fan_in = width;
  }
  return layers;
}

MlpModel mlp_train(const LabeledDataset& data, const MlpConfig& cfg) {
  validate(cfg);
  data.validate();
  auto layers = mlp_init(data.dim(), cfg.hidden_sizes, data.class_count, cfg.seed);
  Rng rng(cfg.seed, 1);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      const auto obj = mlp_objective(layers, data, std::span<const std::size_t>(order).subspan(start, stop - start));
      if (!std::isfinite(obj.loss))
        throw Error("mlp training diverged in epoch " + std::to_string(epoch) + "; reduce mlp.learning_rate");
      for (std::size_t l = 0; l < layers.size(); ++l) {
        auto w = layers[l].weights.values();
        const auto gw = obj.gradient[l].weights.values();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= cfg.learning_rate * gw[i];
        for (std::size_t i = 0; i < layers[l].bias.size(); ++i)
          layers[l].bias[i] -= cfg.learning_rate * obj.gradient[l].bias[i];
      }
    }
  }
  return MlpModel(std::move(layers));
}

}  // namespace copycat
