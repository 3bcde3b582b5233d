#include <doctest.h>

#include <algorithm>

#include "copycat/run_config.hpp"
#include "copycat/scenarios.hpp"
#include "test_support.hpp"

using namespace copycat;

namespace {

ScenarioConfig quick(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.copy.n_train = 3000;
  cfg.copy.n_test = 3000;
  cfg.copy.runs = 1;
  cfg.models.gbt.rounds = 20;
  cfg.toy.runs = 1;
  cfg.toy.grid_resolution = 20;
  cfg.toy.mlp.epochs = 60;
  return cfg;
}

}  // namespace

TEST_SUITE("credit generator") {
  TEST_CASE("default configuration") {
    auto d = generate_credit_like({});
    CHECK(d.size() == 1328);
    CHECK(d.dim() == 19);
    const double rate = static_cast<double>(d.class_counts()[1]) / 1328.0;
    CHECK((rate >= 0.21 && rate <= 0.25));
    auto names = feature_names(d.schema);
    CHECK(std::count(names.begin(), names.end(), "age") == 1);
    CHECK(std::count(names.begin(), names.end(), "economy_level") == 1);
    CHECK(d.class_names == std::vector<std::string>{"repaid", "default"});
  }

  TEST_CASE("same seed gives the same data") {
    CreditGenConfig cfg;
    cfg.seed = 5;
    auto a = generate_credit_like(cfg);
    auto b = generate_credit_like(cfg);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
  }

  TEST_CASE("ten rows still contain both classes") {
    CreditGenConfig cfg;
    cfg.n_rows = 10;
    auto d = generate_credit_like(cfg);
    CHECK(d.size() == 10);
    CHECK(d.class_counts()[0] >= 2);
    CHECK(d.class_counts()[1] >= 2);
  }

  TEST_CASE("infeasible configurations") {
    CreditGenConfig cfg;
    cfg.n_rows = 3;
    CHECK_THROWS_AS(generate_credit_like(cfg), Error);
    cfg = {};
    cfg.d_raw = 12;
    CHECK_THROWS_AS(generate_credit_like(cfg), Error);
    cfg = {};
    cfg.default_rate = 1.0;
    CHECK_THROWS_AS(generate_credit_like(cfg), Error);
  }

  TEST_CASE("prevalence holds across seeds") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      CreditGenConfig cfg;
      cfg.seed = seed;
      auto d = generate_credit_like(cfg);
      const double rate = static_cast<double>(d.class_counts()[1]) / static_cast<double>(d.size());
      CHECK(std::abs(rate - cfg.default_rate) <= 0.02);
    }
  }

  TEST_CASE("engineered map reads the raw schema") {
    auto map = credit_engineered_map(credit_schema());
    CHECK(map.input_dim() == 19);
    CHECK(map.output_dim() == 6);
    Schema wrong{FeatureSpec::numeric("a")};
    CHECK_THROWS_AS(credit_engineered_map(wrong), Error);
  }
}

TEST_SUITE("scenario runs") {
  TEST_CASE("scenario 1 copies on raw attributes") {
    auto data = generate_credit_like({});
    auto report = run_scenario1(data, quick(0));
    CHECK(report.copy_input_dim == 19);
    CHECK(report.oracle_internal_dim == 6);
    CHECK(report.study.runs.size() == 1);
    CHECK(report.to_json().dump() == run_scenario1(data, quick(0)).to_json().dump());
  }

  TEST_CASE("scenario 2 reports baselines and importances") {
    auto data = generate_credit_like({});
    auto report = run_scenario2(data, quick(0));
    REQUIRE(report.importance.has_value());
    CHECK(report.importance->original.size() == 19);
    CHECK(report.importance->copy.size() == 19);
    CHECK(report.baselines.count("raw_lr") == 1);
    auto j = report.to_json();
    CHECK(j.contains("importance"));
  }

  TEST_CASE("toy grid has resolution squared rows and is reproducible") {
    auto a = run_toy(quick(1));
    REQUIRE(a.boundary_grid.has_value());
    CHECK(a.boundary_grid->rows() == 400);
    CHECK(a.boundary_grid->cols() == 4);
    auto b = run_toy(quick(1));
    CHECK(*a.boundary_grid == *b.boundary_grid);
  }

  TEST_CASE("report files") {
    const auto dir = testing_support::scratch_dir("scenario_files");
    run_toy(quick(2)).write(dir);
    for (const char* f : {"report.json", "copy_accuracies.csv", "accuracy_histogram.csv", "boundary_grid.csv"})
      CHECK(std::filesystem::exists(dir / f));
    const auto grid = testing_support::read_file(dir / "boundary_grid.csv");
    CHECK(std::count(grid.begin(), grid.end(), '\n') == 401);
  }

  TEST_CASE("full-scale settings") {
    ScenarioConfig cfg;
    cfg.apply_paper_scale();
    CHECK(cfg.copy.n_train == 1000000);
    CHECK(cfg.copy.n_test == 1000000);
    CHECK(cfg.copy.runs == 100);
    CHECK(cfg.to_json()["copy"]["runs"] == 100);
  }
}

TEST_SUITE("run config") {
  TEST_CASE("defaults") {
    auto rc = parse_run_config({{"version", 1}});
    CHECK(rc.copy.n_train == 100000);
    CHECK(rc.copy.runs == 30);
    CHECK(rc.train_fraction == 0.8);
    CHECK_FALSE(rc.copy.copy_train.max_depth.has_value());
  }

  TEST_CASE("values are read") {
    auto rc = parse_run_config(nlohmann::json::parse(R"({"version": 1, "gbt": {"rounds": 7},
      "copy": {"n_train": 500, "max_depth": 4}, "toy": {"mlp": {"hidden_sizes": [3, 2]}}})"));
    CHECK(rc.train.gbt.rounds == 7);
    CHECK(rc.copy.n_train == 500);
    CHECK(rc.copy.copy_train.max_depth == 4);
    CHECK(rc.toy.mlp.hidden_sizes == std::vector<int>{3, 2});
    auto again = parse_run_config(rc.to_json());
    CHECK(again.to_json() == rc.to_json());
  }

  TEST_CASE("errors name the key") {
    CHECK_THROWS_WITH_AS(parse_run_config({{"version", 1}, {"lr", {{"learnign_rate", 0.1}}}}),
                         doctest::Contains("lr.learnign_rate"), Error);
    CHECK_THROWS_WITH_AS(parse_run_config({{"version", 1}, {"copy", {{"runs", "many"}}}}),
                         doctest::Contains("copy.runs"), Error);
    CHECK_THROWS_WITH_AS(parse_run_config({{"version", 1}, {"gbt", {{"rounds", -1}}}}), doctest::Contains("rounds"),
                         Error);
    CHECK_THROWS_AS(parse_run_config({{"lr", {}}}), Error);
    CHECK_THROWS_AS(parse_run_config({{"version", 2}}), Error);
  }
}
