#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace copycat {

struct LrConfig {
  double learning_rate = 0.1;
  int iterations = 1000;
  double l2_penalty = 0.0;
};

struct CartConfig {
  std::optional<int> max_depth;  // absent: grow until pure
  int min_samples_split = 2;
};

struct GbtConfig {
  int rounds = 100;
  int tree_depth = 3;
  double learning_rate = 0.1;
};

struct MlpConfig {
  std::vector<int> hidden_sizes{32};
  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

struct TrainConfig {
  LrConfig lr;
  CartConfig cart;
  GbtConfig gbt;
  MlpConfig mlp;
};

// Throws copycat::Error naming the first invalid field.
void validate(const LrConfig& cfg);
void validate(const CartConfig& cfg);
void validate(const GbtConfig& cfg);
void validate(const MlpConfig& cfg);

}  // namespace copycat
