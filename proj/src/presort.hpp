#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "copycat/matrix.hpp"

namespace copycat::detail {

// Per-feature sample orderings sorted by (value, row). Every tree node owns
// the same position range [lo, hi) in each feature's ordering, so a split is
// a stable partition of that range in every column.
class PresortedColumns {
 public:
  explicit PresortedColumns(const Matrix& x);

  std::span<const std::uint32_t> order(std::size_t feature, std::size_t lo, std::size_t hi) const {
    return {order_.data() + feature * rows_ + lo, hi - lo};
  }
  std::size_t rows() const { return rows_; }
  std::size_t features() const { return cols_; }

  // Stable partition of [lo, hi) in every column by goes_left[row].
  void partition(std::size_t lo, std::size_t hi, const std::vector<std::uint8_t>& goes_left);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> scratch_;
};

// Midpoint of two consecutive distinct values that still routes `lo` left
// and `hi` right under the `<=` rule.
inline double split_threshold(double lo, double hi) {
  const double mid = lo + (hi - lo) * 0.5;
  return (mid >= lo && mid < hi) ? mid : lo;
}

}  // namespace copycat::detail
