#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "copycat/classifier.hpp"
#include "copycat/copier.hpp"
#include "copycat/data.hpp"
#include "copycat/error.hpp"
#include "copycat/gbt.hpp"
#include "copycat/importance.hpp"
#include "copycat/logistic.hpp"
#include "copycat/metrics.hpp"
#include "copycat/mlp.hpp"
#include "copycat/sampler.hpp"
#include "copycat/scenarios.hpp"
#include "copycat/tree.hpp"

namespace py = pybind11;
using namespace copycat;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw Error("expected a 2-d array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.values().begin());
  return m;
}

Array to_array(const Matrix& m) {
  Array a({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), a.mutable_data());
  return a;
}

LabeledDataset make_dataset(const Array& x, std::vector<int> y, std::optional<std::vector<std::string>> names,
                            int class_count) {
  LabeledDataset d;
  d.features = to_matrix(x);
  d.labels = std::move(y);
  if (names) {
    for (auto& n : *names) d.schema.push_back(FeatureSpec::numeric(n));
  } else {
    for (std::size_t j = 0; j < d.dim(); ++j) d.schema.push_back(FeatureSpec::numeric("x" + std::to_string(j)));
  }
  d.class_count = class_count;
  if (class_count <= 0) {
    int hi = 1;
    for (int v : d.labels) hi = std::max(hi, v);
    d.class_count = std::max(2, hi + 1);
  }
  d.validate();
  return d;
}

// pybind11 holders cannot point to const; the models are immutable anyway.
template <class T>
std::shared_ptr<T> mutable_ptr(std::shared_ptr<const T> p) {
  return std::const_pointer_cast<T>(std::move(p));
}

// JSON crosses the boundary as text; the Python side parses it.
std::string dump(const nlohmann::json& j) { return j.dump(); }

CopyConfig copy_config(std::size_t n_train, std::size_t n_test, std::size_t runs, std::uint64_t seed,
                       std::optional<int> max_depth) {
  CopyConfig c;
  c.n_train = n_train;
  c.n_test = n_test;
  c.runs = runs;
  c.base_seed = seed;
  c.copy_train.max_depth = max_depth;
  c.validate();
  return c;
}

ScenarioConfig scenario_config(std::uint64_t seed, std::size_t n, std::size_t runs) {
  ScenarioConfig c;
  c.seed = seed;
  c.copy.n_train = n;
  c.copy.n_test = n;
  c.copy.runs = runs;
  return c;
}

}  // namespace

PYBIND11_MODULE(_copycat, m) {
  m.doc() = "Copy black-box classifiers into decision trees";

  py::register_exception<Error>(m, "CopycatError", PyExc_ValueError);

  py::class_<LabeledDataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("features"), py::arg("labels"), py::arg("feature_names") = py::none(),
           py::arg("class_count") = 0)
      .def_property_readonly("features", [](const LabeledDataset& d) { return to_array(d.features); })
      .def_readonly("labels", &LabeledDataset::labels)
      .def_readonly("class_count", &LabeledDataset::class_count)
      .def_readonly("class_names", &LabeledDataset::class_names)
      .def_property_readonly("feature_names", [](const LabeledDataset& d) { return feature_names(d.schema); })
      .def("class_counts", &LabeledDataset::class_counts)
      .def("__len__", &LabeledDataset::size);

  m.def("load_csv", py::overload_cast<const std::filesystem::path&, const std::string&>(&load_csv),
        py::arg("path"), py::arg("label_column"));
  m.def("write_csv", &write_csv, py::arg("path"), py::arg("data"), py::arg("label_column") = "label",
        py::arg("decode_nominals") = true);

  py::class_<Standardizer>(m, "Standardizer")
      .def_readonly("means", &Standardizer::means)
      .def_readonly("stds", &Standardizer::stds)
      .def("transform", [](const Standardizer& s, std::vector<double> x) { return s.transform(x); })
      .def("to_json", [](const Standardizer& s) { return dump(s.to_json()); });
  m.def("fit_standardizer", &fit_standardizer);
  m.def("apply_standardizer", &apply_standardizer);
  m.def("invert_standardizer", &invert_standardizer);
  m.def(
      "stratified_split",
      [](const LabeledDataset& d, double train_fraction, std::uint64_t seed) {
        return stratified_split(d, SplitConfig{train_fraction, seed});
      },
      py::arg("data"), py::arg("train_fraction") = 0.8, py::arg("seed") = 0);

  py::class_<Classifier, std::shared_ptr<Classifier>>(m, "Classifier")
      .def("predict", [](const Classifier& c, std::vector<double> x) { return c.predict(x); })
      .def("predict_batch", [](const Classifier& c, const Array& x) { return c.predict_batch(to_matrix(x)); })
      .def_property_readonly("input_dim", &Classifier::input_dim)
      .def_property_readonly("class_count", &Classifier::class_count)
      .def_property_readonly("family", &Classifier::family)
      .def(
          "to_json",
          [](const Classifier& c, std::vector<std::string> names) { return dump(save_model(c, names)); },
          py::arg("feature_names") = std::vector<std::string>{});
  py::class_<LogisticRegressionModel, Classifier, std::shared_ptr<LogisticRegressionModel>>(m, "LogisticRegression")
      .def("predict_proba", [](const LogisticRegressionModel& c, std::vector<double> x) { return c.predict_proba(x); })
      .def_property_readonly("weights", &LogisticRegressionModel::weights)
      .def_property_readonly("bias", &LogisticRegressionModel::bias);
  py::class_<DecisionTreeModel, Classifier, std::shared_ptr<DecisionTreeModel>>(m, "DecisionTree")
      .def_property_readonly("depth", &DecisionTreeModel::depth)
      .def_property_readonly("leaf_count", &DecisionTreeModel::leaf_count);
  py::class_<GradientBoostedTreesModel, Classifier, std::shared_ptr<GradientBoostedTreesModel>>(m, "BoostedTrees")
      .def("score", [](const GradientBoostedTreesModel& c, std::vector<double> x) { return c.score(x); });
  py::class_<MlpModel, Classifier, std::shared_ptr<MlpModel>>(m, "Mlp")
      .def("predict_proba", [](const MlpModel& c, std::vector<double> x) { return c.predict_proba(x); });

  m.def(
      "train_lr",
      [](const LabeledDataset& d, double learning_rate, int iterations, double l2_penalty) {
        LrConfig c{learning_rate, iterations, l2_penalty};
        validate(c);
        return std::make_shared<LogisticRegressionModel>(lr_train(d, c));
      },
      py::arg("data"), py::arg("learning_rate") = 0.1, py::arg("iterations") = 1000, py::arg("l2_penalty") = 0.0);
  m.def(
      "train_cart",
      [](const LabeledDataset& d, std::optional<int> max_depth, int min_samples_split) {
        CartConfig c{max_depth, min_samples_split};
        validate(c);
        return std::make_shared<DecisionTreeModel>(cart_train(d, c));
      },
      py::arg("data"), py::arg("max_depth") = py::none(), py::arg("min_samples_split") = 2);
  m.def(
      "train_gbt",
      [](const LabeledDataset& d, int rounds, int tree_depth, double learning_rate) {
        GbtConfig c{rounds, tree_depth, learning_rate};
        validate(c);
        return std::make_shared<GradientBoostedTreesModel>(gbt_train(d, c));
      },
      py::arg("data"), py::arg("rounds") = 100, py::arg("tree_depth") = 3, py::arg("learning_rate") = 0.1);
  m.def(
      "train_mlp",
      [](const LabeledDataset& d, std::vector<int> hidden_sizes, double learning_rate, int epochs, int batch_size,
         std::uint64_t seed) {
        MlpConfig c{std::move(hidden_sizes), learning_rate, epochs, batch_size, seed};
        validate(c);
        return std::make_shared<MlpModel>(mlp_train(d, c));
      },
      py::arg("data"), py::arg("hidden_sizes") = std::vector<int>{32}, py::arg("learning_rate") = 0.01,
      py::arg("epochs") = 200, py::arg("batch_size") = 32, py::arg("seed") = 0);

  m.def("load_model", [](const std::string& text) { return mutable_ptr(load_model(nlohmann::json::parse(text))); });
  m.def("feature_importance", [](const Classifier& c) { return impurity_feature_importance(c).values; });

  py::class_<SamplingRegion>(m, "Region")
      .def(py::init([](std::vector<double> lo, std::vector<double> hi) {
        SamplingRegion r{std::move(lo), std::move(hi)};
        r.validate();
        return r;
      }))
      .def_readonly("lower", &SamplingRegion::lower)
      .def_readonly("upper", &SamplingRegion::upper)
      .def("contains", [](const SamplingRegion& r, std::vector<double> x) { return r.contains(x); });
  m.def("fit_region", &fit_region, py::arg("data"), py::arg("margin") = 0.05);
  m.def(
      "sample_uniform",
      [](const SamplingRegion& r, std::size_t n, std::uint64_t seed, std::size_t threads) {
        SamplerConfig c;
        c.n_samples = n;
        c.seed = seed;
        return to_array(sample_uniform(r, c, threads));
      },
      py::arg("region"), py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 1);
  m.def(
      "label_with_oracle",
      [](const Array& x, const Classifier& oracle, std::size_t threads) {
        return label_with_oracle(to_matrix(x), oracle, {}, threads);
      },
      py::arg("points"), py::arg("oracle"), py::arg("threads") = 1);

  py::class_<CopyResult>(m, "CopyResult")
      .def_property_readonly("copy", [](const CopyResult& r) { return mutable_ptr(r.copy); })
      .def_readonly("synthetic_train_accuracy", &CopyResult::synthetic_train_accuracy)
      .def_readonly("synthetic_test_fidelity", &CopyResult::synthetic_test_fidelity)
      .def_readonly("original_test_accuracy", &CopyResult::original_test_accuracy)
      .def_readonly("original_test_fidelity", &CopyResult::original_test_fidelity);
  m.def(
      "build_copy",
      [](const Classifier& oracle, const SamplingRegion& region, std::size_t n_train, std::size_t n_test,
         std::uint64_t seed, std::optional<int> max_depth, const LabeledDataset* original_test) {
        return build_copy(oracle, region, copy_config(n_train, n_test, 1, seed, max_depth), seed, original_test);
      },
      py::arg("oracle"), py::arg("region"), py::arg("n_train") = 100000, py::arg("n_test") = 100000,
      py::arg("seed") = 0, py::arg("max_depth") = py::none(), py::arg("original_test") = nullptr);
  m.def(
      "run_study",
      [](const Classifier& oracle, const SamplingRegion& region, const LabeledDataset& original_test,
         std::size_t n_train, std::size_t n_test, std::size_t runs, std::uint64_t seed, std::size_t threads) {
        return dump(run_study(oracle, region, copy_config(n_train, n_test, runs, seed, std::nullopt), original_test,
                              threads)
                        .to_json());
      },
      py::arg("oracle"), py::arg("region"), py::arg("original_test"), py::arg("n_train") = 100000,
      py::arg("n_test") = 100000, py::arg("runs") = 30, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("accuracy", &accuracy);
  m.def("agreement", [](const Classifier& a, const Classifier& b, const Array& x) {
    return agreement(a, b, to_matrix(x));
  });
  m.def("concentration_index", &concentration_index);
  m.def("spearman", &spearman);
  m.def("compare_importances", [](const std::vector<double>& a, const std::vector<double>& b,
                                  const std::vector<std::string>& names) {
    return dump(compare_importances(a, b, names).to_json());
  });

  m.def(
      "generate_credit_like",
      [](std::size_t n_rows, double default_rate, std::uint64_t seed) {
        CreditGenConfig c;
        c.n_rows = n_rows;
        c.default_rate = default_rate;
        c.seed = seed;
        return generate_credit_like(c);
      },
      py::arg("n_rows") = 1328, py::arg("default_rate") = 0.23, py::arg("seed") = 0);
  m.def("generate_interleaved_arcs", &generate_interleaved_arcs, py::arg("n_rows") = 1000, py::arg("noise") = 0.18,
        py::arg("seed") = 0);
  m.def(
      "run_scenario1",
      [](const LabeledDataset& d, std::uint64_t seed, std::size_t n, std::size_t runs, std::size_t threads) {
        return dump(run_scenario1(d, scenario_config(seed, n, runs), threads).to_json());
      },
      py::arg("data"), py::arg("seed") = 0, py::arg("n") = 100000, py::arg("runs") = 30, py::arg("threads") = 1);
  m.def(
      "run_scenario2",
      [](const LabeledDataset& d, std::uint64_t seed, std::size_t n, std::size_t runs, std::size_t threads) {
        return dump(run_scenario2(d, scenario_config(seed, n, runs), threads).to_json());
      },
      py::arg("data"), py::arg("seed") = 0, py::arg("n") = 100000, py::arg("runs") = 30, py::arg("threads") = 1);
  m.def(
      "run_toy",
      [](std::uint64_t seed, std::size_t n, std::size_t runs, std::size_t threads) {
        auto c = scenario_config(seed, n, runs);
        c.toy.runs = runs;
        return dump(run_toy(c, threads).to_json());
      },
      py::arg("seed") = 0, py::arg("n") = 100000, py::arg("runs") = 5, py::arg("threads") = 1);
}
