#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "copycat/data.hpp"
#include "test_support.hpp"

using namespace copycat;
using testing_support::make_dataset;
using testing_support::read_file;
using testing_support::scratch_dir;
using testing_support::write_file;

namespace {

LabeledDataset load_text(const std::string& name, const std::string& text, const std::string& label = "label") {
  const auto dir = scratch_dir("data_" + name);
  write_file(dir / "in.csv", text);
  return load_csv(dir / "in.csv", label);
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Column moments computed directly from the matrix.
std::pair<double, double> moments(const Matrix& m, std::size_t c) {
  double mean = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) mean += m(r, c);
  mean /= static_cast<double>(m.rows());
  double var = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) var += (m(r, c) - mean) * (m(r, c) - mean);
  return {mean, var / static_cast<double>(m.rows())};
}

}  // namespace

TEST_SUITE("csv") {
  TEST_CASE("classes are coded by first appearance") {
    auto d = load_text("classes", "a,b,label\n1,2,yes\n3,4,no\n5,6,yes\n7,8,yes\n");
    CHECK(d.size() == 4);
    CHECK(d.dim() == 2);
    CHECK(d.class_count == 2);
    CHECK(d.labels == std::vector<int>{0, 1, 0, 0});
    CHECK(d.class_names == std::vector<std::string>{"yes", "no"});
    CHECK(d.features(3, 1) == 8.0);
  }

  TEST_CASE("nominal columns are coded by first appearance") {
    auto d = load_text("nominal", "colour,label\nred,0\nblue,1\nred,0\n");
    REQUIRE(d.schema[0].kind == FeatureKind::nominal);
    CHECK(d.schema[0].categories == std::vector<std::string>{"red", "blue"});
    CHECK(d.features.column(0) == std::vector<double>{0.0, 1.0, 0.0});
  }

  TEST_CASE("ragged row names its row") {
    auto msg = error_of([] { load_text("ragged", "a,b,c,label\n1,2,3,x\n1,2,y\n"); });
    CHECK(msg.find("row 1") != std::string::npos);
  }

  TEST_CASE("missing file and missing label column") {
    CHECK_THROWS_AS(load_csv("/nonexistent/copycat.csv", "label"), Error);
    auto msg = error_of([] { load_text("nolabel", "a,b\n1,2\n3,4\n", "target"); });
    CHECK(msg.find("target") != std::string::npos);
  }

  TEST_CASE("unparseable numeric cell under a schema hint names row and column") {
    const auto dir = scratch_dir("data_hint");
    write_file(dir / "in.csv", "a,label\n1,0\noops,1\n");
    CsvOptions opt;
    opt.label_column = "label";
    opt.schema_hint = Schema{FeatureSpec::numeric("a")};
    auto msg = error_of([&] { load_csv(dir / "in.csv", opt); });
    CHECK(msg.find("row 1") != std::string::npos);
    CHECK(msg.find("'a'") != std::string::npos);
  }

  TEST_CASE("a single observed class still gives two classes") {
    auto d = load_text("oneclass", "a,label\n1,x\n2,x\n");
    CHECK(d.class_count == 2);
    CHECK(d.labels == std::vector<int>{0, 0});
  }

  TEST_CASE("write then load round-trips values and categories") {
    const auto dir = scratch_dir("data_roundtrip");
    auto d = load_text("rt_src", "size,colour,label\n1.5,red,yes\n-2.25,blue,no\n3,green,yes\n");
    write_csv(dir / "out.csv", d, "label");
    auto back = load_csv(dir / "out.csv", "label");
    CHECK(back.features == d.features);
    CHECK(back.labels == d.labels);
    CHECK(back.schema == d.schema);
  }

  TEST_CASE("identical bytes give identical datasets") {
    const std::string text = "a,b,label\n0.1,x,p\n0.2,y,q\n0.3,x,p\n";
    auto a = load_text("det_a", text);
    auto b = load_text("det_b", text);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    CHECK(a.schema == b.schema);
  }
}

TEST_SUITE("nominal encoding") {
  const auto spec = FeatureSpec::nominal("colour", {"red", "blue"});

  TEST_CASE("encode known values") {
    CHECK(encode_nominals({"red", "blue", "red"}, spec) == std::vector<double>{0.0, 1.0, 0.0});
    CHECK(encode_nominals({"blue"}, spec) == std::vector<double>{1.0});
  }

  TEST_CASE("unseen category names the value") {
    auto msg = error_of([&] { encode_nominals({"green"}, spec); });
    CHECK(msg.find("green") != std::string::npos);
  }

  TEST_CASE("encode then decode is the identity") {
    Rng rng(4);
    std::vector<std::string> raw(500);
    for (auto& v : raw) v = spec.categories[rng.below(2)];
    CHECK(decode_nominals(encode_nominals(raw, spec), spec) == raw);
  }

  TEST_CASE("invalid schemas") {
    CHECK_THROWS_AS(validate_schema({FeatureSpec::numeric("a"), FeatureSpec::numeric("a")}), Error);
    CHECK_THROWS_AS(validate_schema({FeatureSpec::nominal("c", {})}), Error);
    CHECK_THROWS_AS(validate_schema({FeatureSpec::nominal("c", {"x", "x"})}), Error);
  }
}

TEST_SUITE("standardizer") {
  TEST_CASE("two-point column") {
    Matrix x(2, 1);
    x(0, 0) = 1.0;
    x(1, 0) = 3.0;
    auto s = fit_standardizer(make_dataset(x, {0, 1}));
    CHECK(s.means[0] == 2.0);
    CHECK(s.stds[0] == 1.0);
    auto z = apply_standardizer(make_dataset(x, {0, 1}), s);
    CHECK(z.features(1, 0) == 1.0);
  }

  TEST_CASE("constant column gets unit std") {
    Matrix x(3, 1, 5.0);
    auto s = fit_standardizer(make_dataset(x, {0, 1, 0}));
    CHECK(s.means[0] == 5.0);
    CHECK(s.stds[0] == 1.0);
    CHECK(s.constant_columns[0]);
  }

  TEST_CASE("identity standardizer leaves data unchanged") {
    auto d = testing_support::smooth_dataset(50, 3, 1);
    Standardizer id{{0, 0, 0}, {1, 1, 1}, {false, false, false}};
    CHECK(apply_standardizer(d, id).features == d.features);
  }

  TEST_CASE("moments after standardization") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(seed);
      Matrix x(257, 4);
      for (std::size_t r = 0; r < x.rows(); ++r) {
        x(r, 0) = rng.uniform(-1e3, 1e3);
        x(r, 1) = 1e6 + rng.normal();
        x(r, 2) = rng.normal() * 1e-3;
        x(r, 3) = static_cast<double>(rng.below(3));
      }
      auto d = make_dataset(x, std::vector<int>(257, 0));
      d.labels[0] = 1;
      auto z = apply_standardizer(d, fit_standardizer(d));
      for (std::size_t c = 0; c < 4; ++c) {
        auto [mean, var] = moments(z.features, c);
        CHECK(std::abs(mean) <= 1e-9);
        CHECK(std::abs(var - 1.0) <= 1e-9);
      }
      auto back = invert_standardizer(z, fit_standardizer(d));
      for (std::size_t i = 0; i < x.values().size(); ++i) {
        const double scale = std::max(1.0, std::abs(x.values()[i]));
        CHECK(std::abs(back.features.values()[i] - x.values()[i]) <= 1e-12 * scale);
      }
    }
  }

  TEST_CASE("dimension mismatch and empty data") {
    auto d = testing_support::smooth_dataset(10, 2, 0);
    Standardizer s{{0}, {1}, {false}};
    CHECK_THROWS_AS(apply_standardizer(d, s), Error);
    LabeledDataset empty;
    CHECK_THROWS_AS(fit_standardizer(empty), Error);
  }

  TEST_CASE("json round trip") {
    auto s = fit_standardizer(testing_support::smooth_dataset(40, 3, 2));
    auto back = Standardizer::from_json(s.to_json());
    CHECK(back.means == s.means);
    CHECK(back.stds == s.stds);
  }
}

TEST_SUITE("stratified split") {
  LabeledDataset labelled(std::size_t n_pos, std::size_t n_neg, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> y(n_pos + n_neg, 0);
    std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n_pos), 1);
    rng.shuffle(y);
    Matrix x(y.size(), 1);
    for (std::size_t i = 0; i < y.size(); ++i) x(i, 0) = static_cast<double>(i);
    return make_dataset(x, y);
  }

  TEST_CASE("credit-sized split keeps 61 defaults in the test set") {
    auto d = labelled(303, 1025, 0);
    auto [train, test] = stratified_split(d, {0.8, 0});
    CHECK(test.size() == 266);
    CHECK(test.class_counts()[1] == 61);
    CHECK(train.class_counts() == std::vector<std::size_t>{820, 242});
  }

  TEST_CASE("ten rows five per class") {
    auto [train, test] = stratified_split(labelled(5, 5, 1), {0.8, 3});
    CHECK(train.class_counts() == std::vector<std::size_t>{4, 4});
    CHECK(test.class_counts() == std::vector<std::size_t>{1, 1});
  }

  TEST_CASE("same seed gives the same partition") {
    auto d = labelled(40, 60, 2);
    auto a = stratified_split(d, {0.7, 9});
    auto b = stratified_split(d, {0.7, 9});
    CHECK(a.first.features == b.first.features);
    CHECK(a.second.features == b.second.features);
    auto c = stratified_split(d, {0.7, 10});
    CHECK_FALSE(c.first.features == a.first.features);
  }

  TEST_CASE("class with one row is rejected") {
    CHECK_THROWS_AS(stratified_split(labelled(1, 5, 0), {0.8, 0}), Error);
    CHECK_THROWS_AS(stratified_split(labelled(3, 5, 0), {1.0, 0}), Error);
  }

  TEST_CASE("partition and proportions hold across sizes and fractions") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t pos = 2 + rng.below(60), neg = 2 + rng.below(200);
      const double frac = 0.05 + 0.9 * rng.uniform01();
      auto d = labelled(pos, neg, trial);
      auto [train, test] = stratified_split(d, {frac, static_cast<std::uint64_t>(trial)});
      // Every row lands on exactly one side: the ids in column 0 are a partition.
      std::vector<double> ids = train.features.column(0);
      auto t = test.features.column(0);
      ids.insert(ids.end(), t.begin(), t.end());
      std::sort(ids.begin(), ids.end());
      std::vector<double> all(d.size());
      std::iota(all.begin(), all.end(), 0.0);
      CHECK(ids == all);
      for (int c = 0; c < 2; ++c) {
        const std::size_t total = d.class_counts()[static_cast<std::size_t>(c)];
        const std::size_t expect = stratified_train_count(total, frac);
        CHECK(train.class_counts()[static_cast<std::size_t>(c)] == expect);
        CHECK(train.class_counts()[static_cast<std::size_t>(c)] + test.class_counts()[static_cast<std::size_t>(c)] ==
              total);
      }
      // Rounding per class moves each side's prevalence by at most one row.
      const double global = static_cast<double>(pos) / static_cast<double>(d.size());
      for (const auto* side : {&train, &test}) {
        const double share = static_cast<double>(side->class_counts()[1]) / static_cast<double>(side->size());
        CHECK(std::abs(share - global) <= 1.0 / static_cast<double>(side->size()) + 1e-12);
      }
    }
  }

  TEST_CASE("round-half-up rule") {
    CHECK(stratified_train_count(303, 0.8) == 242);   // 242.4
    CHECK(stratified_train_count(1025, 0.8) == 820);  // exact
    CHECK(stratified_train_count(5, 0.5) == 3);       // 2.5 rounds up
    CHECK(stratified_train_count(2, 0.99) == 1);      // clamped to leave one test row
    CHECK(stratified_train_count(2, 0.01) == 1);      // clamped to keep one train row
  }
}
