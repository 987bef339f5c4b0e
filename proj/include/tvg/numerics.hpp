#pragma once

#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace tvg {

/// log C(n, k) via lgamma; -inf outside 0 <= k <= n.
inline double log_binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return -std::numeric_limits<double>::infinity();
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

/// k * log(x) with 0 * log(0) = 0, so that 0^0 = 1.
inline double xlogy(long long k, double x) {
  if (k == 0) return 0.0;
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(k) * std::log(x);
}

/// x^k with 0^0 = 1.
inline double pow0(double x, long long k) { return k == 0 ? 1.0 : std::pow(x, static_cast<double>(k)); }

/// Exact C(n, k) for oracle comparisons.
inline boost::multiprecision::cpp_int exact_binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  boost::multiprecision::cpp_int r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace tvg
