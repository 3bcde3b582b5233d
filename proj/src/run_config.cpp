#include "copycat/run_config.hpp"

#include <fstream>
#include <set>

#include "copycat/error.hpp"

namespace copycat {

namespace {

using nlohmann::json;

class Section {
 public:
  Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw Error("config section '" + path_ + "' must be an object");
  }

  // Rejects keys that were never read.
  void finish(const std::set<std::string>& allowed) const {
    for (const auto& [key, _] : doc_.items())
      if (!allowed.count(key)) throw Error("unknown config key '" + qualified(key) + "'");
  }

  template <typename T>
  void read(const std::string& key, T& out) const {
    if (!doc_.contains(key)) return;
    const json& v = doc_.at(key);
    try {
      if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw Error("");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && v.get<std::int64_t>() < 0) throw Error("");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw Error("");
      }
      out = v.get<T>();
    } catch (const std::exception&) {
      throw Error("config key '" + qualified(key) + "' has an invalid value " + v.dump());
    }
  }

  void read_optional_int(const std::string& key, std::optional<int>& out) const {
    if (!doc_.contains(key)) return;
    const json& v = doc_.at(key);
    if (v.is_null()) {
      out.reset();
      return;
    }
    if (!v.is_number_integer()) throw Error("config key '" + qualified(key) + "' has an invalid value " + v.dump());
    out = v.get<int>();
  }

  bool has(const std::string& key) const { return doc_.contains(key); }
  Section child(const std::string& key) const { return Section(doc_.at(key), qualified(key)); }

 private:
  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& doc_;
  std::string path_;
};

void read_mlp(const Section& s, MlpConfig& mlp) {
  s.read("hidden_sizes", mlp.hidden_sizes);
  s.read("learning_rate", mlp.learning_rate);
  s.read("epochs", mlp.epochs);
  s.read("batch_size", mlp.batch_size);
  s.read("seed", mlp.seed);
  s.finish({"hidden_sizes", "learning_rate", "epochs", "batch_size", "seed"});
}

json mlp_json(const MlpConfig& m) {
  return {{"hidden_sizes", m.hidden_sizes},
          {"learning_rate", m.learning_rate},
          {"epochs", m.epochs},
          {"batch_size", m.batch_size},
          {"seed", m.seed}};
}

}  // namespace

RunConfig::RunConfig() {
  copy.n_train = 100'000;
  copy.n_test = 100'000;
  copy.runs = 30;
}

RunConfig parse_run_config(const json& doc) {
  RunConfig rc;
  const Section root(doc, "");
  int version = 0;
  if (!doc.contains("version")) throw Error("config key 'version' is required and must equal 1");
  root.read("version", version);
  if (version != 1) throw Error("config key 'version' must equal 1, got " + std::to_string(version));

  if (root.has("lr")) {
    const auto s = root.child("lr");
    s.read("learning_rate", rc.train.lr.learning_rate);
    s.read("iterations", rc.train.lr.iterations);
    s.read("l2_penalty", rc.train.lr.l2_penalty);
    s.finish({"learning_rate", "iterations", "l2_penalty"});
  }
  if (root.has("cart")) {
    const auto s = root.child("cart");
    s.read_optional_int("max_depth", rc.train.cart.max_depth);
    s.read("min_samples_split", rc.train.cart.min_samples_split);
    s.finish({"max_depth", "min_samples_split"});
  }
  if (root.has("gbt")) {
    const auto s = root.child("gbt");
    s.read("rounds", rc.train.gbt.rounds);
    s.read("tree_depth", rc.train.gbt.tree_depth);
    s.read("learning_rate", rc.train.gbt.learning_rate);
    s.finish({"rounds", "tree_depth", "learning_rate"});
  }
  if (root.has("mlp")) read_mlp(root.child("mlp"), rc.train.mlp);
  if (root.has("split")) {
    const auto s = root.child("split");
    s.read("train_fraction", rc.train_fraction);
    s.finish({"train_fraction"});
  }
  if (root.has("sampler")) {
    const auto s = root.child("sampler");
    s.read("margin", rc.copy.margin);
    s.read("chunk_size", rc.copy.chunk_size);
    s.finish({"margin", "chunk_size"});
  }
  if (root.has("copy")) {
    const auto s = root.child("copy");
    s.read("n_train", rc.copy.n_train);
    s.read("n_test", rc.copy.n_test);
    s.read("runs", rc.copy.runs);
    s.read_optional_int("max_depth", rc.copy.copy_train.max_depth);
    s.read("min_samples_split", rc.copy.copy_train.min_samples_split);
    s.read("histogram_bins", rc.copy.histogram_bins);
    s.finish({"n_train", "n_test", "runs", "max_depth", "min_samples_split", "histogram_bins"});
  }
  if (root.has("credit")) {
    const auto s = root.child("credit");
    s.read("n_rows", rc.credit.n_rows);
    s.read("default_rate", rc.credit.default_rate);
    s.read("d_raw", rc.credit.d_raw);
    s.read("noise", rc.credit.noise);
    s.finish({"n_rows", "default_rate", "d_raw", "noise"});
  }
  if (root.has("toy")) {
    const auto s = root.child("toy");
    s.read("n_rows", rc.toy.n_rows);
    s.read("noise", rc.toy.noise);
    s.read("grid_resolution", rc.toy.grid_resolution);
    s.read("runs", rc.toy.runs);
    if (s.has("mlp")) read_mlp(s.child("mlp"), rc.toy.mlp);
    s.finish({"n_rows", "noise", "grid_resolution", "runs", "mlp"});
  }
  root.finish({"version", "lr", "cart", "gbt", "mlp", "split", "sampler", "copy", "credit", "toy"});

  validate(rc.train.lr);
  validate(rc.train.cart);
  validate(rc.train.gbt);
  validate(rc.train.mlp);
  validate(rc.toy.mlp);
  rc.copy.validate();
  if (!(rc.train_fraction > 0.0 && rc.train_fraction < 1.0)) throw Error("config key 'split.train_fraction' must lie in (0, 1)");
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(doc);
}

json RunConfig::to_json() const {
  json cart = {{"min_samples_split", train.cart.min_samples_split}};
  cart["max_depth"] = train.cart.max_depth ? json(*train.cart.max_depth) : json(nullptr);
  json copy_json = {{"n_train", copy.n_train},
                    {"n_test", copy.n_test},
                    {"runs", copy.runs},
                    {"min_samples_split", copy.copy_train.min_samples_split},
                    {"histogram_bins", copy.histogram_bins}};
  copy_json["max_depth"] = copy.copy_train.max_depth ? json(*copy.copy_train.max_depth) : json(nullptr);
  json toy_json = toy.to_json();
  toy_json["mlp"] = mlp_json(toy.mlp);
  return {{"version", 1},
          {"lr", {{"learning_rate", train.lr.learning_rate}, {"iterations", train.lr.iterations}, {"l2_penalty", train.lr.l2_penalty}}},
          {"cart", cart},
          {"gbt", {{"rounds", train.gbt.rounds}, {"tree_depth", train.gbt.tree_depth}, {"learning_rate", train.gbt.learning_rate}}},
          {"mlp", mlp_json(train.mlp)},
          {"split", {{"train_fraction", train_fraction}}},
          {"sampler", {{"margin", copy.margin}, {"chunk_size", copy.chunk_size}}},
          {"copy", copy_json},
          {"credit", {{"n_rows", credit.n_rows}, {"default_rate", credit.default_rate}, {"d_raw", credit.d_raw}, {"noise", credit.noise}}},
          {"toy", toy_json}};
}

ScenarioConfig RunConfig::scenario(std::uint64_t seed) const {
  ScenarioConfig sc;
  sc.seed = seed;
  sc.train_fraction = train_fraction;
  sc.credit = credit;
  sc.credit.seed = seed;
  sc.toy = toy;
  sc.models = train;
  sc.copy = copy;
  sc.copy.base_seed = seed;
  return sc;
}

}  // namespace copycat
