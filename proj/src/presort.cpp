#include "presort.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "copycat/error.hpp"

namespace copycat::detail {

PresortedColumns::PresortedColumns(const Matrix& x) : rows_(x.rows()), cols_(x.cols()) {
  if (rows_ > std::numeric_limits<std::uint32_t>::max()) throw Error("too many rows for tree induction");
  order_.resize(rows_ * cols_);
  scratch_.resize(rows_);
  for (std::size_t f = 0; f < cols_; ++f) {
    auto begin = order_.begin() + static_cast<std::ptrdiff_t>(f * rows_);
    auto end = begin + static_cast<std::ptrdiff_t>(rows_);
    std::iota(begin, end, std::uint32_t{0});
    std::sort(begin, end, [&](std::uint32_t a, std::uint32_t b) {
      const double va = x(a, f);
      const double vb = x(b, f);
      return va < vb || (va == vb && a < b);
    });
  }
}

void PresortedColumns::partition(std::size_t lo, std::size_t hi, const std::vector<std::uint8_t>& goes_left) {
  for (std::size_t f = 0; f < cols_; ++f) {
    std::uint32_t* seg = order_.data() + f * rows_;
    std::size_t write = lo;
    std::size_t spill = 0;
    for (std::size_t p = lo; p < hi; ++p) {
      const std::uint32_t i = seg[p];
      if (goes_left[i]) {
        seg[write++] = i;
      } else {
        scratch_[spill++] = i;
      }
    }
    std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(spill), seg + write);
  }
}

}  // namespace copycat::detail
