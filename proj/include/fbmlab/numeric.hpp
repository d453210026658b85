#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace fbmlab {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Reductions over per-path values are performed in fixed chunks of this size,
// each chunk compensated, chunk totals then combined left to right. The
// result therefore never depends on thread count.
inline constexpr std::size_t kReductionChunk = 4096;

double fixed_order_sum_serial(std::span<const double> values);
double fixed_order_sum_parallel(std::span<const double> values);

inline double fixed_order_sum(std::span<const double> values) {
  return fixed_order_sum_parallel(values);
}

}  // namespace fbmlab
