#pragma once

#include <cstdint>
#include <unordered_map>

#include "shuffleparity/noise.hpp"

namespace shuffleparity {

// Wilson score interval for a binomial proportion.
struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
  double center = 0.5;
  double halfwidth = 0.5;
};

WilsonInterval wilson(int64_t successes, int64_t trials, double z = 1.96);

// Welford running mean/variance.
struct RunningMoments {
  int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  void merge(const RunningMoments& other);
  double variance() const {  // population variance
    return count > 0 ? m2 / static_cast<double>(count) : 0.0;
  }
};

// Counts of integer outcomes, for empirical-vs-exact distribution checks.
class IntCounter {
 public:
  void add(int64_t v, int64_t count = 1) {
    counts_[v] += count;
    total_ += count;
  }
  void merge(const IntCounter& other);
  int64_t total() const { return total_; }
  const std::unordered_map<int64_t, int64_t>& counts() const { return counts_; }

  // Total variation distance between the empirical distribution and an exact
  // pmf: half the L1 gap over the pmf support plus half the empirical mass
  // landing outside it.
  double tv_against(const IntegerPmf& pmf) const;

 private:
  std::unordered_map<int64_t, int64_t> counts_;
  int64_t total_ = 0;
};

}  // namespace shuffleparity
