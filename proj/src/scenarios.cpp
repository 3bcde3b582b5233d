#include "copycat/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "copycat/error.hpp"
#include "copycat/gbt.hpp"
#include "copycat/importance.hpp"
#include "copycat/logistic.hpp"
#include "copycat/mlp.hpp"
#include "copycat/random.hpp"
#include "copycat/sampler.hpp"

namespace copycat {

namespace {

enum CreditColumn : std::size_t {
  kAge,
  kMonthlyIncome,
  kLoanAmount,
  kPropertyValue,
  kLoanTermYears,
  kInterestRate,
  kCreditHistoryMonths,
  kOpenAccounts,
  kDelinquencies,
  kMonthlyDebt,
  kYearsEmployed,
  kDependents,
  kSavingsBalance,
  kEconomyLevel,
  kEmploymentType,
  kMaritalStatus,
  kRegion,
  kPropertyType,
  kEducation,
  kCreditColumns
};

constexpr std::size_t kInformal = 2;  // employment_type category index

double uniform_int(Rng& rng, int lo, int hi) {
  return static_cast<double>(lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))));
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

struct Prepared {
  LabeledDataset train;
  LabeledDataset test;
  Standardizer standardizer;
};

Prepared prepare(const LabeledDataset& data, const ScenarioConfig& cfg) {
  auto [train, test] = stratified_split(data, SplitConfig{cfg.train_fraction, cfg.seed});
  Prepared p;
  p.standardizer = fit_standardizer(train);
  p.train = apply_standardizer(train, p.standardizer);
  p.test = apply_standardizer(test, p.standardizer);
  return p;
}

CopyConfig study_config(const ScenarioConfig& cfg) {
  CopyConfig copy = cfg.copy;
  copy.base_seed = cfg.seed;
  return copy;
}

double test_accuracy(const Classifier& model, const LabeledDataset& test) {
  return accuracy(model.predict_batch(test.features), test.labels);
}

}  // namespace

void CreditGenConfig::validate() const {
  if (d_raw != kCreditColumns)
    throw Error("credit generator has a fixed list of " + std::to_string(kCreditColumns) + " attributes; d_raw=" +
                std::to_string(d_raw) + " is not supported");
  if (!(default_rate > 0.0 && default_rate < 1.0)) throw Error("credit.default_rate must lie in (0, 1)");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw Error("credit.noise must be >= 0");
  const auto defaults = static_cast<std::size_t>(std::floor(default_rate * static_cast<double>(n_rows) + 0.5));
  if (defaults < 2 || n_rows < defaults + 2)
    throw Error("credit generator cannot place at least 2 rows in each class with n_rows=" + std::to_string(n_rows) +
                " and default_rate=" + csv_number(default_rate));
}

nlohmann::json CreditGenConfig::to_json() const {
  return {{"n_rows", n_rows}, {"default_rate", default_rate}, {"seed", seed}, {"d_raw", d_raw}, {"noise", noise}};
}

Schema credit_schema() {
  return {
      FeatureSpec::numeric("age"),
      FeatureSpec::numeric("monthly_income"),
      FeatureSpec::numeric("loan_amount"),
      FeatureSpec::numeric("property_value"),
      FeatureSpec::numeric("loan_term_years"),
      FeatureSpec::numeric("interest_rate"),
      FeatureSpec::numeric("credit_history_months"),
      FeatureSpec::numeric("open_accounts"),
      FeatureSpec::numeric("delinquencies"),
      FeatureSpec::numeric("monthly_debt"),
      FeatureSpec::numeric("years_employed"),
      FeatureSpec::numeric("dependents"),
      FeatureSpec::numeric("savings_balance"),
      FeatureSpec::nominal("economy_level", {"low", "lower_middle", "middle", "upper_middle", "high"}),
      FeatureSpec::nominal("employment_type", {"salaried", "self_employed", "informal", "retired"}),
      FeatureSpec::nominal("marital_status", {"single", "married", "divorced", "widowed"}),
      FeatureSpec::nominal("region", {"north", "central", "south", "gulf"}),
      FeatureSpec::nominal("property_type", {"house", "apartment", "condo"}),
      FeatureSpec::nominal("education", {"primary", "secondary", "university", "postgraduate"}),
  };
}

LabeledDataset generate_credit_like(const CreditGenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t n = cfg.n_rows;
  LabeledDataset data;
  data.schema = credit_schema();
  data.class_count = 2;
  data.class_names = {"repaid", "default"};
  data.features = Matrix(n, kCreditColumns);
  std::vector<double> score(n);

  for (std::size_t i = 0; i < n; ++i) {
    auto row = data.features.row(i);
    const double u_income = rng.uniform01();
    const double u_loan = rng.uniform01();
    const double u_rate = rng.uniform01();
    const double u_debt = rng.uniform01();
    row[kAge] = uniform_int(rng, 21, 70);
    row[kMonthlyIncome] = std::round(8000.0 + 52000.0 * u_income);
    row[kLoanAmount] = std::round(200000.0 + 2800000.0 * u_loan);
    row[kPropertyValue] = std::round(rng.uniform(300000.0, 4000000.0));
    row[kLoanTermYears] = 10.0 + 5.0 * uniform_int(rng, 0, 4);
    row[kInterestRate] = 8.0 + 6.0 * u_rate;
    row[kCreditHistoryMonths] = uniform_int(rng, 0, 240);
    row[kOpenAccounts] = uniform_int(rng, 0, 12);
    // Delinquencies: truncated geometric, P(k) proportional to 0.55^k.
    double k = 0.0;
    while (k < 5.0 && rng.uniform01() < 0.55) k += 1.0;
    row[kDelinquencies] = k;
    row[kMonthlyDebt] = std::round(15000.0 * u_debt);
    row[kYearsEmployed] = uniform_int(rng, 0, 35);
    row[kDependents] = uniform_int(rng, 0, 5);
    row[kSavingsBalance] = std::round(rng.uniform(0.0, 500000.0));
    row[kEconomyLevel] = uniform_int(rng, 0, 4);
    row[kEmploymentType] = uniform_int(rng, 0, 3);
    row[kMaritalStatus] = uniform_int(rng, 0, 3);
    row[kRegion] = uniform_int(rng, 0, 3);
    row[kPropertyType] = uniform_int(rng, 0, 2);
    row[kEducation] = uniform_int(rng, 0, 3);

    const double a = (row[kAge] - 45.5) / 24.5;
    const double l = 2.0 * u_loan - 1.0;
    const double r = 2.0 * u_rate - 1.0;
    const double debt = 2.0 * u_debt - 1.0;
    const double income = 2.0 * u_income - 1.0;
    const double q = row[kDelinquencies] / 2.5 - 1.0;
    const double e = row[kEconomyLevel] / 2.0 - 1.0;
    const double informal = row[kEmploymentType] == static_cast<double>(kInformal) ? 1.0 : 0.0;
    score[i] = 2.5 * a * a + 2.5 * l * r + 0.8 * (debt - income) + 0.6 * q - 0.5 * e + 0.5 * informal +
               cfg.noise * rng.normal();
  }

  // The round(default_rate * n) highest scores default.
  const auto defaults = static_cast<std::size_t>(std::floor(cfg.default_rate * static_cast<double>(n) + 0.5));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return score[x] > score[y]; });
  data.labels.assign(n, 0);
  for (std::size_t j = 0; j < defaults; ++j) data.labels[idx[j]] = 1;
  return data;
}

FeatureMap credit_engineered_map(const Schema& schema) {
  if (schema.size() != kCreditColumns || schema[kAge].name != "age" || schema[kEconomyLevel].name != "economy_level")
    throw Error("engineered credit features need the credit schema");
  return FeatureMap(kCreditColumns, {
                                        {"age", TermKind::raw, kAge, kAge},
                                        {"economy_level", TermKind::raw, kEconomyLevel, kEconomyLevel},
                                        {"age_squared", TermKind::square, kAge, kAge},
                                        {"loan_term_load", TermKind::product, kLoanAmount, kLoanTermYears},
                                        {"debt_over_income", TermKind::difference, kMonthlyDebt, kMonthlyIncome},
                                        {"delinquency_vs_economy", TermKind::difference, kDelinquencies, kEconomyLevel},
                                    });
}

nlohmann::json ToyConfig::to_json() const {
  return {{"n_rows", n_rows},
          {"noise", noise},
          {"grid_resolution", grid_resolution},
          {"runs", runs},
          {"mlp",
           {{"hidden_sizes", mlp.hidden_sizes},
            {"learning_rate", mlp.learning_rate},
            {"epochs", mlp.epochs},
            {"batch_size", mlp.batch_size}}}};
}

LabeledDataset generate_interleaved_arcs(std::size_t n_rows, double noise, std::uint64_t seed) {
  if (n_rows < 4) throw Error("interleaved arcs need at least 4 rows");
  if (!(noise >= 0.0)) throw Error("interleaved arcs noise must be >= 0");
  constexpr double kPi = 3.14159265358979323846;
  Rng rng(seed);
  LabeledDataset data;
  data.schema = {FeatureSpec::numeric("x"), FeatureSpec::numeric("y")};
  data.class_count = 2;
  data.class_names = {"upper_arc", "lower_arc"};
  data.features = Matrix(n_rows, 2);
  data.labels.resize(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const int label = static_cast<int>(i % 2);
    const double t = kPi * rng.uniform01();
    double x = std::cos(t);
    double y = std::sin(t);
    if (label == 1) {
      x = 1.0 - x;
      y = 0.5 - y;
    }
    data.features(i, 0) = x + noise * rng.normal();
    data.features(i, 1) = y + noise * rng.normal();
    data.labels[i] = label;
  }
  return data;
}

ScenarioConfig::ScenarioConfig() {
  copy.n_train = 100'000;
  copy.n_test = 100'000;
  copy.runs = 30;
}

void ScenarioConfig::apply_paper_scale() {
  paper_scale = true;
  copy.n_train = 1'000'000;
  copy.n_test = 1'000'000;
  copy.runs = 100;
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json cart = {{"min_samples_split", models.cart.min_samples_split}};
  cart["max_depth"] = models.cart.max_depth ? nlohmann::json(*models.cart.max_depth) : nlohmann::json(nullptr);
  return {{"seed", seed},
          {"train_fraction", train_fraction},
          {"paper_scale", paper_scale},
          {"credit", credit.to_json()},
          {"toy", toy.to_json()},
          {"lr",
           {{"learning_rate", models.lr.learning_rate},
            {"iterations", models.lr.iterations},
            {"l2_penalty", models.lr.l2_penalty}}},
          {"gbt",
           {{"rounds", models.gbt.rounds},
            {"tree_depth", models.gbt.tree_depth},
            {"learning_rate", models.gbt.learning_rate}}},
          {"copy", copy.to_json()}};
}

nlohmann::json ScenarioReport::to_json() const {
  nlohmann::json j = {{"scenario", scenario},
                      {"original_model", original_model},
                      {"original_accuracy", original_accuracy},
                      {"baselines", baselines},
                      {"copy_accuracy", format_mean_std(study.original_test_accuracy)},
                      {"copy_input_dim", copy_input_dim},
                      {"oracle_internal_dim", oracle_internal_dim},
                      {"study", study.to_json()},
                      {"config", config},
                      {"notes", notes}};
  if (importance) j["importance"] = importance->to_json();
  return j;
}

void ScenarioReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", to_json().dump(2) + "\n");

  std::ostringstream runs_csv;
  runs_csv << std::setprecision(17) << "run,seed,original_test_accuracy,original_test_fidelity,synthetic_test_fidelity\n";
  for (std::size_t r = 0; r < study.runs.size(); ++r) {
    const auto& run = study.runs[r];
    runs_csv << r << ',' << run.seed << ',' << run.original_test_accuracy.value_or(NAN) << ','
             << run.original_test_fidelity.value_or(NAN) << ',' << run.synthetic_test_fidelity << '\n';
  }
  write_text(dir / "copy_accuracies.csv", runs_csv.str());

  std::ostringstream hist;
  hist << std::setprecision(17) << "bin_low,bin_high,count\n";
  const auto& h = study.accuracy_histogram;
  for (std::size_t b = 0; b < h.counts.size(); ++b) hist << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.counts[b] << '\n';
  write_text(dir / "accuracy_histogram.csv", hist.str());

  if (importance) {
    importance->write_csv(dir / "importance_original.csv", false);
    importance->write_csv(dir / "importance_copy.csv", true);
  }
  if (boundary_grid) {
    std::ostringstream grid;
    grid << std::setprecision(17) << "x,y,original_label,copy_label\n";
    for (std::size_t r = 0; r < boundary_grid->rows(); ++r) {
      const auto row = boundary_grid->row(r);
      grid << row[0] << ',' << row[1] << ',' << static_cast<int>(row[2]) << ',' << static_cast<int>(row[3]) << '\n';
    }
    write_text(dir / "boundary_grid.csv", grid.str());
  }
}

ScenarioReport run_scenario1(const LabeledDataset& data, const ScenarioConfig& cfg, std::size_t threads) {
  const Prepared prep = prepare(data, cfg);
  const FeatureMap engineered = credit_engineered_map(data.schema).standardized_on(prep.train.features);

  LabeledDataset engineered_train = prep.train;
  engineered_train.features = engineered.apply(prep.train.features);
  engineered_train.schema.clear();
  for (const auto& t : engineered.terms()) engineered_train.schema.push_back(FeatureSpec::numeric(t.name));
  auto lr = std::make_shared<LogisticRegressionModel>(lr_train(engineered_train, cfg.models.lr));
  const auto oracle = pipeline_classifier(engineered, lr);

  ScenarioReport report;
  report.scenario = "scenario1";
  report.original_model = "engineered features + logistic regression";
  report.original_accuracy = test_accuracy(*oracle, prep.test);
  report.baselines["pipeline_lr"] = report.original_accuracy;
  const SamplingRegion region = fit_region(prep.train, cfg.copy.margin);
  report.study = run_study(*oracle, region, study_config(cfg), prep.test, threads);
  report.copy_input_dim = report.study.runs.front().copy->input_dim();
  report.oracle_internal_dim = lr->input_dim();
  report.config = cfg.to_json();
  report.notes = {
      "credit data is a synthetic stand-in generated from a documented latent-score rule",
      "engineered variables (age_squared, loan_term_load, debt_over_income, delinquency_vs_economy) are "
      "invented stand-ins computed on standardized raw attributes",
      "copies are trained and evaluated on the 19 raw attributes"};
  return report;
}

ScenarioReport run_scenario2(const LabeledDataset& data, const ScenarioConfig& cfg, std::size_t threads) {
  const Prepared prep = prepare(data, cfg);
  auto gbt = std::make_shared<GradientBoostedTreesModel>(gbt_train(prep.train, cfg.models.gbt));
  const auto raw_lr = lr_train(prep.train, cfg.models.lr);

  ScenarioReport report;
  report.scenario = "scenario2";
  report.original_model = "gradient-boosted trees";
  report.original_accuracy = test_accuracy(*gbt, prep.test);
  report.baselines["gbt"] = report.original_accuracy;
  report.baselines["raw_lr"] = test_accuracy(raw_lr, prep.test);
  const SamplingRegion region = fit_region(prep.train, cfg.copy.margin);
  report.study = run_study(*gbt, region, study_config(cfg), prep.test, threads);
  report.copy_input_dim = report.study.runs.front().copy->input_dim();
  report.oracle_internal_dim = gbt->input_dim();

  const auto& representative = *report.study.runs[report.study.median_run()].copy;
  report.importance = compare_importances(impurity_feature_importance(*gbt).values,
                                          impurity_feature_importance(representative).values,
                                          feature_names(data.schema));
  report.config = cfg.to_json();
  report.notes = {"credit data is a synthetic stand-in generated from a documented latent-score rule",
                  "importance compares the boosted model with the copy of median original-test accuracy"};
  return report;
}

ScenarioReport run_toy(const ScenarioConfig& cfg, std::size_t threads) {
  const LabeledDataset data = generate_interleaved_arcs(cfg.toy.n_rows, cfg.toy.noise, cfg.seed);
  const Prepared prep = prepare(data, cfg);
  MlpConfig mlp_cfg = cfg.toy.mlp;
  mlp_cfg.seed = cfg.seed;
  auto mlp = std::make_shared<MlpModel>(mlp_train(prep.train, mlp_cfg));

  ScenarioReport report;
  report.scenario = "toy";
  report.original_model = "feed-forward network";
  report.original_accuracy = test_accuracy(*mlp, prep.test);
  report.baselines["mlp"] = report.original_accuracy;
  const SamplingRegion region = fit_region(prep.train, cfg.copy.margin);
  CopyConfig copy = study_config(cfg);
  copy.runs = cfg.paper_scale ? cfg.copy.runs : cfg.toy.runs;
  report.study = run_study(*mlp, region, copy, prep.test, threads);
  report.copy_input_dim = 2;
  report.oracle_internal_dim = 2;

  const auto& copy_model = *report.study.runs[report.study.median_run()].copy;
  const std::size_t res = cfg.toy.grid_resolution;
  if (res < 2) throw Error("toy grid_resolution must be >= 2");
  Matrix grid(res * res, 4);
  for (std::size_t iy = 0; iy < res; ++iy) {
    for (std::size_t ix = 0; ix < res; ++ix) {
      const double fx = static_cast<double>(ix) / static_cast<double>(res - 1);
      const double fy = static_cast<double>(iy) / static_cast<double>(res - 1);
      const double point[2] = {region.lower[0] + fx * (region.upper[0] - region.lower[0]),
                               region.lower[1] + fy * (region.upper[1] - region.lower[1])};
      auto row = grid.row(iy * res + ix);
      row[0] = point[0];
      row[1] = point[1];
      row[2] = mlp->predict(point);
      row[3] = copy_model.predict(point);
    }
  }
  report.boundary_grid = std::move(grid);
  report.config = cfg.to_json();
  report.notes = {"two-dimensional interleaved-arcs data stands in for the illustrative dataset",
                  "boundary grid coordinates are in standardized units"};
  return report;
}

}  // namespace copycat
