#pragma once

#include <cmath>

namespace knotscope {

// Neumaier's variant of Kahan summation; exact for the partial sums that
// matter at n ~ 1e7 and insensitive to the order of magnitudes.
class NeumaierSum {
public:
  void add(double x) noexcept {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  NeumaierSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace knotscope
