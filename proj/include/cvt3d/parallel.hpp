#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace cvt3d {

/// Worker count used by parallel_for. Defaults to CVT3D_THREADS when set,
/// otherwise the hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n). Work is split into contiguous static chunks,
/// so callers that write results by index get output independent of the
/// worker count. Nested calls run serially on the calling worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace cvt3d
