#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace frlab::detail {

/// Kahan-compensated accumulator for real or complex terms.
template <class T>
class Compensated {
 public:
  void add(T term) {
    const T y = term - carry_;
    const T t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  T value() const { return sum_; }

 private:
  T sum_{};
  T carry_{};
};

/// tw[m] = e^{2 pi i m / n} for m in [0, n).
inline std::vector<std::complex<double>> roots_of_unity(std::uint64_t n) {
  std::vector<std::complex<double>> tw(n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::uint64_t m = 0; m < n; ++m) {
    const double a = step * static_cast<double>(m);
    tw[m] = {std::cos(a), std::sin(a)};
  }
  return tw;
}

}  // namespace frlab::detail
