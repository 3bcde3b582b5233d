#include "copycat/train_config.hpp"

#include <cmath>

#include "copycat/error.hpp"

namespace copycat {

void validate(const LrConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) throw Error("lr.learning_rate must be > 0");
  if (cfg.iterations < 0) throw Error("lr.iterations must be >= 0");
  if (!(cfg.l2_penalty >= 0.0)) throw Error("lr.l2_penalty must be >= 0");
}

void validate(const CartConfig& cfg) {
  if (cfg.max_depth && *cfg.max_depth < 0) throw Error("cart.max_depth must be >= 0");
  if (cfg.min_samples_split < 2) throw Error("cart.min_samples_split must be >= 2");
}

void validate(const GbtConfig& cfg) {
  if (cfg.rounds < 0) throw Error("gbt.rounds must be >= 0");
  if (cfg.tree_depth < 1) throw Error("gbt.tree_depth must be >= 1");
  if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0)) throw Error("gbt.learning_rate must lie in (0, 1]");
}

void validate(const MlpConfig& cfg) {
  if (cfg.hidden_sizes.empty()) throw Error("mlp.hidden_sizes must be non-empty");
  for (int h : cfg.hidden_sizes)
    if (h < 1) throw Error("mlp.hidden_sizes entries must be >= 1");
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) throw Error("mlp.learning_rate must be > 0");
  if (cfg.epochs < 0) throw Error("mlp.epochs must be >= 0");
  if (cfg.batch_size < 1) throw Error("mlp.batch_size must be >= 1");
}

}  // namespace copycat
