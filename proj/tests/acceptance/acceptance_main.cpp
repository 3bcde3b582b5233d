// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
//
//   copycat_acceptance <path-to-copycat-cli> [criterion numbers...]

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "copycat/copier.hpp"
#include "copycat/data.hpp"
#include "copycat/gbt.hpp"
#include "copycat/logistic.hpp"
#include "copycat/mlp.hpp"
#include "copycat/parallel.hpp"
#include "copycat/scenarios.hpp"
#include "copycat/tree.hpp"
#include "test_support.hpp"

using namespace copycat;
namespace fs = std::filesystem;
using testing_support::FnClassifier;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream ss;
  ss.precision(digits);
  ss << std::fixed << v;
  return ss.str();
}

std::string sci(double v) {
  std::ostringstream ss;
  ss.precision(2);
  ss << std::scientific << v;
  return ss.str();
}

std::size_t threads() { return default_thread_count(); }

Matrix uniform_points(std::size_t n, std::size_t d, std::uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  Matrix m(n, d);
  for (double& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

// Random axis-aligned tree of the given depth on [-1, 1]^d.
DecisionTreeModel random_tree(std::size_t d, int depth, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ClassTreeNode> nodes;
  std::function<int(int)> grow = [&](int level) -> int {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (level == depth) {
      const int label = static_cast<int>(rng.below(2));
      nodes[static_cast<std::size_t>(id)].label = label;
      nodes[static_cast<std::size_t>(id)].histogram = {label == 0 ? 1u : 0u, label == 1 ? 1u : 0u};
      nodes[static_cast<std::size_t>(id)].samples = 1;
      return id;
    }
    const int feature = static_cast<int>(rng.below(d));
    const double threshold = rng.uniform(-0.6, 0.6);
    const int left = grow(level + 1);
    const int right = grow(level + 1);
    auto& n = nodes[static_cast<std::size_t>(id)];
    n.feature = feature;
    n.threshold = threshold;
    n.left = left;
    n.right = right;
    n.histogram = {1, 1};
    n.samples = 2;
    return id;
  };
  grow(0);
  return DecisionTreeModel(nodes, d, 2);
}

// 1. Zero empirical error on oracle-labelled synthetic data.
Outcome zero_error() {
  std::size_t exact = 0;
  std::string worst;
  Rng rng(2024);
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 2 + rng.below(5);
    const std::uint64_t s = rng.next();
    SamplingRegion region;
    for (std::size_t j = 0; j < d; ++j) {
      const double lo = rng.uniform(-5.0, 5.0);
      region.lower.push_back(lo);
      region.upper.push_back(lo + rng.uniform(0.1, 10.0));
    }
    // Rotate through oracle families trained on data inside the region.
    auto data = testing_support::smooth_dataset(400, d, s);
    for (std::size_t i = 0; i < data.size(); ++i)
      for (std::size_t j = 0; j < d; ++j)
        data.features(i, j) = region.lower[j] + (data.features(i, j) + 2.0) / 4.0 * (region.upper[j] - region.lower[j]);
    std::shared_ptr<const Classifier> oracle;
    switch (t % 4) {
      case 0: oracle = std::make_shared<GradientBoostedTreesModel>(gbt_train(data, {30, 3, 0.1})); break;
      case 1: oracle = std::make_shared<LogisticRegressionModel>(lr_train(apply_standardizer(data, fit_standardizer(data)), {})); break;
      case 2: oracle = std::make_shared<MlpModel>(mlp_train(data, {{8}, 0.05, 20, 32, s})); break;
      default: oracle = std::make_shared<DecisionTreeModel>(cart_train(data, {})); break;
    }
    if (t % 4 == 1) {
      // The logistic model was fit on standardized inputs; wrap it so it reads raw points.
      auto st = fit_standardizer(data);
      oracle = std::make_shared<PipelineClassifier>(
          [st](std::span<const double> x) { return st.transform(x); }, d, d, oracle);
    }
    CopyConfig cfg;
    cfg.n_train = 10000;
    cfg.n_test = 1000;
    cfg.runs = 1;
    try {
      auto r = build_copy(*oracle, region, cfg, rng.next());
      if (r.synthetic_train_accuracy == 1.0) ++exact;
      else worst = fmt(r.synthetic_train_accuracy, 6);
    } catch (const Error& e) {
      worst = e.what();
    }
  }
  return {exact == 50, std::to_string(exact) + "/50 copies with training accuracy exactly 1.0" +
                           (worst.empty() ? "" : "; failure: " + worst)};
}

// 2. Fidelity grows with N against a fixed GBT oracle in five dimensions.
Outcome asymptotic_fidelity() {
  auto data = testing_support::smooth_dataset(2000, 5, 31);
  auto oracle = gbt_train(data, {100, 3, 0.1});
  CopyConfig base;
  base.n_test = 20000;
  auto sweep = fidelity_vs_n_sweep(oracle, fit_region(data, 0.05), {100, 1000, 10000, 100000}, 20, 500, base, nullptr,
                                   threads());
  bool monotone = true;
  std::string table;
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& cur = sweep.rows[i].synthetic_test_fidelity;
    table += (i ? ", " : "") + std::to_string(sweep.rows[i].n) + ":" + fmt(cur.mean) + "±" + fmt(cur.std);
    if (i == 0) continue;
    const auto& prev = sweep.rows[i - 1].synthetic_test_fidelity;
    const double pooled = std::sqrt(0.5 * (prev.std * prev.std + cur.std * cur.std));
    monotone = monotone && cur.mean >= prev.mean - pooled;
  }
  const double gain = sweep.rows.back().synthetic_test_fidelity.mean - sweep.rows.front().synthetic_test_fidelity.mean;
  return {monotone && gain >= 0.05, "fidelity by N {" + table + "}; gain " + fmt(gain) + " (need >= 0.05)"};
}

// 3. A depth-3 tree oracle is recovered almost everywhere.
Outcome in_class_recovery() {
  const auto oracle = random_tree(3, 3, 7);
  SamplingRegion region{{-1, -1, -1}, {1, 1, 1}};
  CopyConfig cfg;
  cfg.n_train = 100000;
  cfg.n_test = 100000;
  auto r = build_copy(oracle, region, cfg, 11);
  // 100^3 lattice of cell centres.
  std::size_t agree = 0, positive = 0;
  std::vector<double> x(3);
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j)
      for (int k = 0; k < 100; ++k) {
        x = {-1.0 + (i + 0.5) * 0.02, -1.0 + (j + 0.5) * 0.02, -1.0 + (k + 0.5) * 0.02};
        const int label = oracle.predict(x);
        positive += label == 1;
        agree += label == r.copy->predict(x);
      }
  const double grid = static_cast<double>(agree) / 1e6;
  const double share = static_cast<double>(positive) / 1e6;
  // Guard against a vacuous oracle that labels (almost) everything alike.
  const bool nontrivial = share > 0.05 && share < 0.95;
  return {nontrivial && r.synthetic_test_fidelity >= 0.995 && grid >= 0.995,
          "synthetic fidelity " + fmt(r.synthetic_test_fidelity) + ", lattice agreement " + fmt(grid) +
              " (need >= 0.995); oracle class-1 share " + fmt(share) + ", copy leaves " +
              std::to_string(r.copy->leaf_count())};
}

// 4. Toy data: MLP original and CART copy.
Outcome toy() {
  ScenarioConfig cfg;
  cfg.seed = 0;
  cfg.copy.n_train = 100000;
  cfg.copy.n_test = 100000;
  auto report = run_toy(cfg, threads());
  const double orig = report.original_accuracy;
  const double copy = report.study.original_test_accuracy.mean;
  return {orig >= 0.95 && copy >= orig - 0.05,
          "MLP accuracy " + fmt(orig) + ", copy " + format_mean_std(report.study.original_test_accuracy) +
              " (need MLP >= 0.95, copy >= MLP - 0.05)"};
}

// Desk-scale scenario 2 (N = 1e5, 30 runs), shared by criteria 5 and 9.
const ScenarioReport& scenario2_report() {
  static const ScenarioReport report = [] {
    ScenarioConfig cfg;
    cfg.seed = 0;
    return run_scenario2(generate_credit_like(cfg.credit), cfg, threads());
  }();
  return report;
}

// 5. Credit scenarios: raw LR <= copy <= GBT, copies within 0.06 of their originals.
Outcome scenario_ordering() {
  ScenarioConfig cfg;
  cfg.seed = 0;
  const auto& s2 = scenario2_report();
  auto s1 = run_scenario1(generate_credit_like(cfg.credit), cfg, threads());
  const double lr = s2.baselines.at("raw_lr"), gbt = s2.original_accuracy;
  const double c2 = s2.study.original_test_accuracy.mean;
  const double p1 = s1.original_accuracy, c1 = s1.study.original_test_accuracy.mean;
  const bool ok = lr <= c2 && c2 <= gbt && std::abs(gbt - c2) <= 0.06 && std::abs(p1 - c1) <= 0.06;
  return {ok, "scenario 2: raw LR " + fmt(lr) + " <= copy " + format_mean_std(s2.study.original_test_accuracy) +
                  " <= GBT " + fmt(gbt) + "; scenario 1: pipeline " + fmt(p1) + ", copy " +
                  format_mean_std(s1.study.original_test_accuracy) + " (gaps need <= 0.06)"};
}

// 6. Gradients against central differences; GBT against re-summation.
Outcome numerics() {
  Rng rng(99);
  double lr_worst = 0.0, mlp_worst = 0.0;
  auto data = testing_support::smooth_dataset(60, 4, 5);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> w(4);
    for (double& v : w) v = rng.uniform(-2, 2);
    const double b = rng.uniform(-1, 1);
    const auto obj = lr_objective(w, b, data, 0.1);
    const double h = 1e-6;
    for (std::size_t j = 0; j <= 4; ++j) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (j < 4) {
        wp[j] += h;
        wm[j] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double num = (lr_objective(wp, bp, data, 0.1).loss - lr_objective(wm, bm, data, 0.1).loss) / (2 * h);
      lr_worst = std::max(lr_worst, testing_support::rel_diff(j < 4 ? obj.grad_weights[j] : obj.grad_bias, num));
    }

    auto layers = mlp_init(4, {6}, 2, rng.next());
    for (auto& l : layers)
      for (double& v : l.bias) v = rng.uniform(-0.5, 0.5);
    const auto g = mlp_objective(layers, data);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      auto probe = [&](double& p, double analytic) {
        const double saved = p;
        p = saved + h;
        const double up = mlp_objective(layers, data).loss;
        p = saved - h;
        const double down = mlp_objective(layers, data).loss;
        p = saved;
        mlp_worst = std::max(mlp_worst, testing_support::rel_diff(analytic, (up - down) / (2 * h), 1e-7));
      };
      auto wv = layers[l].weights.values();
      for (std::size_t i = 0; i < wv.size(); ++i) probe(wv[i], g.gradient[l].weights.values()[i]);
      for (std::size_t i = 0; i < layers[l].bias.size(); ++i) probe(layers[l].bias[i], g.gradient[l].bias[i]);
    }
  }

  auto gdata = testing_support::smooth_dataset(500, 5, 6);
  auto model = gbt_train(gdata, {50, 3, 0.1});
  const auto payload = model.payload();
  auto pts = uniform_points(100, 5, 8, -3, 3);
  std::size_t exact = 0;
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    double sum = 0.0;
    for (const auto& t : payload["trees"]) {
      std::size_t n = 0;
      while (t["feature"][n].get<int>() >= 0) {
        const auto f = t["feature"][n].get<std::size_t>();
        n = pts(i, f) <= t["threshold"][n].get<double>() ? t["left"][n].get<std::size_t>()
                                                         : t["right"][n].get<std::size_t>();
      }
      sum += t["value"][n].get<double>();
    }
    const double s = payload["initial_score"].get<double>() + payload["learning_rate"].get<double>() * sum;
    exact += model.score(pts.row(i)) == s && model.predict(pts.row(i)) == (s > 0.0 ? 1 : 0);
  }
  return {lr_worst <= 1e-6 && mlp_worst <= 1e-5 && exact == 100,
          "LR worst rel err " + sci(lr_worst) + " (<= 1e-6), MLP " + sci(mlp_worst) +
              " (<= 1e-5), GBT exact " + std::to_string(exact) + "/100"};
}

// 7. Standardization moments and split counts.
Outcome preprocessing() {
  auto data = generate_credit_like({});
  auto z = apply_standardizer(data, fit_standardizer(data));
  double worst = 0.0;
  for (std::size_t c = 0; c < z.dim(); ++c) {
    double mean = 0.0, var = 0.0;
    for (std::size_t r = 0; r < z.size(); ++r) mean += z.features(r, c);
    mean /= static_cast<double>(z.size());
    for (std::size_t r = 0; r < z.size(); ++r) var += (z.features(r, c) - mean) * (z.features(r, c) - mean);
    var /= static_cast<double>(z.size());
    worst = std::max({worst, std::abs(mean), std::abs(var - 1.0)});
  }
  // A 1328-row table with 303 defaults.
  std::vector<int> y(1328, 0);
  std::fill(y.begin(), y.begin() + 303, 1);
  Rng rng(3);
  rng.shuffle(y);
  auto table = testing_support::make_dataset(Matrix(1328, 1), y);
  auto [train, test] = stratified_split(table, {0.8, 0});
  const bool counts = test.size() == 266 && test.class_counts()[1] == 61 && train.class_counts()[1] == 242 &&
                      train.class_counts()[0] == 820;
  bool generated = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto [tr, te] = stratified_split(data, {0.8, seed});
    for (std::size_t c = 0; c < 2; ++c) {
      const auto total = data.class_counts()[c];
      generated = generated && tr.class_counts()[c] == stratified_train_count(total, 0.8) &&
                  tr.class_counts()[c] + te.class_counts()[c] == total;
    }
  }
  return {worst <= 1e-9 && counts && generated,
          "worst moment deviation " + sci(worst) + "; 1328/303 split -> test " + std::to_string(test.size()) +
              " rows, " + std::to_string(test.class_counts()[1]) + " defaults"};
}

int run_cli(const std::string& cli, const std::string& args) {
  const int status = std::system((cli + " " + args + " > /dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 8. CLI copy output is byte-identical across runs and worker counts.
Outcome determinism(const std::string& cli) {
  const auto dir = testing_support::scratch_dir("acceptance_cli");
  write_csv(dir / "credit.csv", generate_credit_like({}), "label");
  const std::string data = (dir / "credit.csv").string(), model = (dir / "gbt.json").string();
  if (run_cli(cli, "train --data " + data + " --model gbt --split 0.8 --out " + model) != 0)
    return {false, "training the oracle failed"};
  const std::string base = "copy --oracle " + model + " --data " + data + " --n 100000 --runs 30 --seed 7";
  const bool ran = run_cli(cli, base + " --threads 1 --out " + (dir / "a.json").string()) == 0 &&
                   run_cli(cli, base + " --threads 1 --out " + (dir / "b.json").string()) == 0 &&
                   run_cli(cli, base + " --threads 4 --out " + (dir / "c.json").string()) == 0;
  if (!ran) return {false, "copy command failed"};
  const auto a = testing_support::read_file(dir / "a.json");
  const bool same = !a.empty() && a == testing_support::read_file(dir / "b.json") &&
                    a == testing_support::read_file(dir / "c.json");
  return {same, std::string(same ? "identical" : "different") + " JSON for two --threads 1 runs and --threads 4 (" +
                    std::to_string(a.size()) + " bytes, N=1e5, 30 runs)"};
}

// 9. Scenario 2 importance vectors.
Outcome importance() {
  const auto& report = scenario2_report();
  if (!report.importance) return {false, "no importance report"};
  const auto& imp = *report.importance;
  bool ok = imp.original.size() == 19 && imp.copy.size() == 19 && imp.names.size() == 19;
  for (const auto* v : {&imp.original, &imp.copy}) {
    double sum = 0.0;
    for (double x : *v) {
      ok = ok && x >= 0.0;
      sum += x;
    }
    ok = ok && std::abs(sum - 1.0) <= 1e-12;
  }
  ok = ok && imp.top3_overlap >= 2 && std::isfinite(imp.original_concentration) &&
       std::isfinite(imp.copy_concentration);
  std::string top;
  for (std::size_t k = 0; k < 3; ++k) top += (k ? "," : "") + imp.names[imp.order[k]];
  return {ok, "top-3 overlap " + std::to_string(imp.top3_overlap) + " (copy top-3: " + top +
                  "); concentration original " + fmt(imp.original_concentration) + ", copy " +
                  fmt(imp.copy_concentration)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: copycat_acceptance <copycat-cli> [criteria...]\n";
    return 2;
  }
  const std::string cli = argv[1];
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"zero empirical error", zero_error},
      {"asymptotic fidelity", asymptotic_fidelity},
      {"in-class oracle recovery", in_class_recovery},
      {"toy MLP copy", toy},
      {"scenario ordering", scenario_ordering},
      {"numerical correctness", numerics},
      {"preprocessing exactness", preprocessing},
      {"determinism", [&] { return determinism(cli); }},
      {"importance reporting", importance},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << criteria[i].first << ": " << o.detail << " ("
              << fmt(secs, 1) << " s)" << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
