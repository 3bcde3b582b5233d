// copycat: train originals, copy them into decision trees, run the credit
// and toy scenarios, and export feature importances.
//
// Exit codes: 0 success, 1 data/validation error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "copycat/copier.hpp"
#include "copycat/data.hpp"
#include "copycat/error.hpp"
#include "copycat/gbt.hpp"
#include "copycat/importance.hpp"
#include "copycat/logistic.hpp"
#include "copycat/metrics.hpp"
#include "copycat/mlp.hpp"
#include "copycat/parallel.hpp"
#include "copycat/random.hpp"
#include "copycat/run_config.hpp"
#include "copycat/sampler.hpp"
#include "copycat/scenarios.hpp"
#include "copycat/tree.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw copycat::Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw copycat::Error(path.string() + " is not valid JSON: " + e.what());
  }
}

void write_json(const fs::path& path, const json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw copycat::Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

fs::path standardizer_path(const fs::path& model_path) {
  return model_path.parent_path() / (model_path.stem().string() + ".standardizer.json");
}

json schema_json(const copycat::LabeledDataset& data) {
  json features = json::array();
  for (const auto& spec : data.schema) {
    json f = {{"name", spec.name}, {"kind", spec.kind == copycat::FeatureKind::nominal ? "nominal" : "numeric"}};
    if (spec.kind == copycat::FeatureKind::nominal) f["categories"] = spec.categories;
    features.push_back(f);
  }
  return {{"features", features}, {"class_names", data.class_names}};
}

copycat::CsvOptions csv_options(const std::string& label, const json& model_doc) {
  copycat::CsvOptions options{label, std::nullopt, std::nullopt};
  if (!model_doc.contains("data_schema")) return options;
  const auto& s = model_doc.at("data_schema");
  copycat::Schema schema;
  for (const auto& f : s.at("features")) {
    if (f.at("kind") == "nominal") {
      schema.push_back(copycat::FeatureSpec::nominal(f.at("name"), f.at("categories").get<std::vector<std::string>>()));
    } else {
      schema.push_back(copycat::FeatureSpec::numeric(f.at("name")));
    }
  }
  options.schema_hint = std::move(schema);
  options.class_names = s.at("class_names").get<std::vector<std::string>>();
  return options;
}

std::size_t thread_count(const std::optional<std::size_t>& flag) {
  return flag ? std::max<std::size_t>(1, *flag) : copycat::default_thread_count();
}

struct TrainArgs {
  std::string data;
  std::string label = "label";
  std::string model;
  std::string config;
  std::string out;
  std::optional<double> split;
  std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& args) {
  const copycat::RunConfig rc = args.config.empty() ? copycat::RunConfig{} : copycat::load_run_config(args.config);
  const auto raw = copycat::load_csv(args.data, args.label);

  copycat::LabeledDataset train = raw;
  std::optional<copycat::LabeledDataset> test;
  if (args.split) {
    auto [tr, te] = copycat::stratified_split(raw, copycat::SplitConfig{*args.split, args.seed});
    train = std::move(tr);
    test = std::move(te);
  }
  const auto standardizer = copycat::fit_standardizer(train);
  train = copycat::apply_standardizer(train, standardizer);
  if (test) test = copycat::apply_standardizer(*test, standardizer);

  copycat::ClassifierPtr model;
  if (args.model == "lr") {
    model = std::make_shared<copycat::LogisticRegressionModel>(copycat::lr_train(train, rc.train.lr));
  } else if (args.model == "cart") {
    model = std::make_shared<copycat::DecisionTreeModel>(copycat::cart_train(train, rc.train.cart));
  } else if (args.model == "gbt") {
    model = std::make_shared<copycat::GradientBoostedTreesModel>(copycat::gbt_train(train, rc.train.gbt));
  } else {
    auto mlp_cfg = rc.train.mlp;
    mlp_cfg.seed = args.seed;
    model = std::make_shared<copycat::MlpModel>(copycat::mlp_train(train, mlp_cfg));
  }

  json doc = copycat::save_model(*model, copycat::feature_names(raw.schema));
  doc["data_schema"] = schema_json(raw);
  const fs::path out(args.out);
  write_json(out, doc);
  write_json(standardizer_path(out), standardizer.to_json());

  std::cout << std::setprecision(6) << "train accuracy: "
            << copycat::accuracy(model->predict_batch(train.features), train.labels) << '\n';
  if (test) std::cout << "test accuracy: " << copycat::accuracy(model->predict_batch(test->features), test->labels) << '\n';
  return 0;
}

struct CopyArgs {
  std::string oracle;
  std::string data;
  std::string label = "label";
  std::string config;
  std::string out;
  std::string dump_synthetic;
  std::optional<std::size_t> n;
  std::optional<std::size_t> n_test;
  std::optional<std::size_t> runs;
  std::optional<double> split;
  std::uint64_t seed = 0;
  std::optional<std::size_t> threads;
};

int cmd_copy(const CopyArgs& args) {
  copycat::RunConfig rc = args.config.empty() ? copycat::RunConfig{} : copycat::load_run_config(args.config);
  if (args.n) {
    rc.copy.n_train = *args.n;
    if (!args.n_test) rc.copy.n_test = *args.n;
  }
  if (args.n_test) rc.copy.n_test = *args.n_test;
  if (args.runs) rc.copy.runs = *args.runs;
  if (args.split) rc.train_fraction = *args.split;
  rc.copy.base_seed = args.seed;
  rc.copy.validate();

  const json model_doc = read_json(args.oracle);
  const auto oracle = copycat::load_model(model_doc);
  auto data = copycat::load_csv(args.data, csv_options(args.label, model_doc));
  const fs::path std_path = standardizer_path(args.oracle);
  if (fs::exists(std_path)) data = copycat::apply_standardizer(data, copycat::Standardizer::from_json(read_json(std_path)));
  if (data.dim() != oracle->input_dim())
    throw copycat::Error("data has " + std::to_string(data.dim()) + " features, oracle expects " +
                         std::to_string(oracle->input_dim()));

  auto [train, test] = copycat::stratified_split(data, copycat::SplitConfig{rc.train_fraction, args.seed});
  const auto region = copycat::fit_region(train, rc.copy.margin);
  const auto study = copycat::run_study(*oracle, region, rc.copy, test, thread_count(args.threads));

  if (!args.dump_synthetic.empty()) {
    copycat::SamplerConfig sampler{rc.copy.n_train, copycat::derive_seed(args.seed, 0), rc.copy.margin, rc.copy.chunk_size};
    copycat::write_synthetic_csv(args.dump_synthetic, copycat::sample_labeled(region, *oracle, sampler, data.schema));
  }

  json doc = study.to_json();
  doc["command"] = {{"name", "copy"},
                    {"oracle_family", oracle->family()},
                    {"seed", args.seed},
                    {"train_fraction", rc.train_fraction},
                    {"test_rows", test.size()}};
  doc["run_config"] = rc.to_json();
  write_json(args.out, doc);
  std::cout << "copy accuracy: " << copycat::format_mean_std(study.original_test_accuracy) << '\n'
            << "synthetic fidelity: " << copycat::format_mean_std(study.synthetic_test_fidelity) << '\n';
  return 0;
}

struct ScenarioArgs {
  std::string name;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool paper_scale = false;
  std::optional<std::size_t> n;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> threads;
};

int cmd_scenario(const ScenarioArgs& args) {
  const copycat::RunConfig rc = args.config.empty() ? copycat::RunConfig{} : copycat::load_run_config(args.config);
  copycat::ScenarioConfig cfg = rc.scenario(args.seed);
  if (args.paper_scale) cfg.apply_paper_scale();
  if (args.n) cfg.copy.n_train = cfg.copy.n_test = *args.n;
  if (args.runs) cfg.copy.runs = cfg.toy.runs = *args.runs;
  const std::size_t threads = thread_count(args.threads);

  copycat::ScenarioReport report;
  if (args.name == "toy") {
    report = copycat::run_toy(cfg, threads);
  } else {
    const auto data = copycat::generate_credit_like(cfg.credit);
    fs::create_directories(args.out);
    copycat::write_csv(fs::path(args.out) / "credit_data.csv", data, "default");
    report = args.name == "scenario1" ? copycat::run_scenario1(data, cfg, threads)
                                      : copycat::run_scenario2(data, cfg, threads);
  }
  report.write(args.out);

  std::cout << std::fixed << std::setprecision(3) << report.scenario << ": original (" << report.original_model
            << ") accuracy " << report.original_accuracy << '\n';
  for (const auto& [name, value] : report.baselines) std::cout << "  " << name << ": " << value << '\n';
  std::cout << "  copy accuracy: " << copycat::format_mean_std(report.study.original_test_accuracy) << '\n';
  if (report.importance) {
    std::cout << "  importance top-3 overlap: " << report.importance->top3_overlap
              << ", concentration original/copy: " << report.importance->original_concentration << " / "
              << report.importance->copy_concentration << '\n';
  }
  return 0;
}

int cmd_importance(const std::string& model_path, const std::string& out_path) {
  const json doc = read_json(model_path);
  const auto model = copycat::load_model(doc);
  const auto importance = copycat::impurity_feature_importance(*model);
  auto names = copycat::model_feature_names(doc);
  if (names.empty())
    for (std::size_t j = 0; j < model->input_dim(); ++j) names.push_back("f" + std::to_string(j));
  if (fs::path(out_path).has_parent_path()) fs::create_directories(fs::path(out_path).parent_path());
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw copycat::Error("cannot write " + out_path);
  out << "feature,importance\n" << std::setprecision(17);
  for (std::size_t j = 0; j < names.size(); ++j) out << names[j] << ',' << importance.values[j] << '\n';
  if (importance.degenerate) std::clog << "warning: model has no informative splits; importances are uniform\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"copycat: copy trained classifiers into interpretable decision trees"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train an original model on a CSV dataset");
  train_cmd->add_option("--data", train.data, "CSV file with a header row")->required();
  train_cmd->add_option("--label", train.label, "Label column name")->capture_default_str();
  train_cmd->add_option("--model", train.model, "Model family")->required()->check(CLI::IsMember({"lr", "cart", "gbt", "mlp"}));
  train_cmd->add_option("--config", train.config, "JSON run configuration");
  train_cmd->add_option("--out", train.out, "Output model JSON")->required();
  train_cmd->add_option("--split", train.split, "Hold out a stratified test fraction of 1 - SPLIT")->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--seed", train.seed, "Random seed")->capture_default_str();

  CopyArgs copy;
  auto* copy_cmd = app.add_subcommand("copy", "Copy a saved model with unconstrained decision trees");
  copy_cmd->add_option("--oracle", copy.oracle, "Model JSON written by `train`")->required();
  copy_cmd->add_option("--data", copy.data, "Original CSV dataset")->required();
  copy_cmd->add_option("--label", copy.label, "Label column name")->capture_default_str();
  copy_cmd->add_option("--n", copy.n, "Synthetic training points per run");
  copy_cmd->add_option("--n-test", copy.n_test, "Synthetic test points per run (default: --n)");
  copy_cmd->add_option("--runs", copy.runs, "Independent copy runs");
  copy_cmd->add_option("--split", copy.split, "Train fraction of the original data")->check(CLI::Range(0.0, 1.0));
  copy_cmd->add_option("--seed", copy.seed, "Random seed")->capture_default_str();
  copy_cmd->add_option("--config", copy.config, "JSON run configuration");
  copy_cmd->add_option("--threads", copy.threads, "Worker threads (default: COPYCAT_THREADS or all cores)");
  copy_cmd->add_option("--dump-synthetic", copy.dump_synthetic, "Write run 0's labeled synthetic training set to CSV");
  copy_cmd->add_option("--out", copy.out, "Output study JSON")->required();

  ScenarioArgs scenario;
  auto* scenario_cmd = app.add_subcommand("scenario", "Run a bundled end-to-end scenario");
  scenario_cmd->add_option("name", scenario.name, "toy | scenario1 | scenario2")
      ->required()
      ->check(CLI::IsMember({"toy", "scenario1", "scenario2"}));
  scenario_cmd->add_option("--seed", scenario.seed, "Random seed")->capture_default_str();
  scenario_cmd->add_flag("--paper-scale", scenario.paper_scale, "Use 10^6 synthetic points and 100 runs");
  scenario_cmd->add_option("--n", scenario.n, "Override synthetic points per run");
  scenario_cmd->add_option("--runs", scenario.runs, "Override the number of runs");
  scenario_cmd->add_option("--config", scenario.config, "JSON run configuration");
  scenario_cmd->add_option("--threads", scenario.threads, "Worker threads (default: COPYCAT_THREADS or all cores)");
  scenario_cmd->add_option("--out", scenario.out, "Output directory")->required();

  std::string importance_model;
  std::string importance_out;
  auto* importance_cmd = app.add_subcommand("importance", "Export impurity-based feature importances of a tree model");
  importance_cmd->add_option("--model", importance_model, "Model JSON")->required();
  importance_cmd->add_option("--out", importance_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*train_cmd) return cmd_train(train);
    if (*copy_cmd) return cmd_copy(copy);
    if (*scenario_cmd) return cmd_scenario(scenario);
    if (*importance_cmd) return cmd_importance(importance_model, importance_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}
