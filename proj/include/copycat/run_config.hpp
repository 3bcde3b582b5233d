#pragma once

#include <cstdint>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "copycat/copier.hpp"
#include "copycat/scenarios.hpp"
#include "copycat/train_config.hpp"

namespace copycat {

// JSON run configuration shared by every command. Layout:
//   {"version": 1,
//    "lr": {learning_rate, iterations, l2_penalty},
//    "cart": {max_depth, min_samples_split},
//    "gbt": {rounds, tree_depth, learning_rate},
//    "mlp": {hidden_sizes, learning_rate, epochs, batch_size, seed},
//    "split": {train_fraction},
//    "sampler": {margin, chunk_size},
//    "copy": {n_train, n_test, runs, max_depth, min_samples_split, histogram_bins},
//    "credit": {n_rows, default_rate, d_raw, noise},
//    "toy": {n_rows, noise, grid_resolution, runs, mlp: {...}}}
// Every section and key is optional; unknown keys are errors.
struct RunConfig {
  TrainConfig train;
  double train_fraction = 0.8;
  CopyConfig copy;
  CreditGenConfig credit;
  ToyConfig toy;

  RunConfig();
  nlohmann::json to_json() const;
  ScenarioConfig scenario(std::uint64_t seed) const;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace copycat
