#include "shuffleparity/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace shuffleparity {

WilsonInterval wilson(int64_t successes, int64_t trials, double z) {
  if (trials < 1) throw std::invalid_argument("wilson: trials < 1");
  if (successes < 0 || successes > trials) {
    throw std::invalid_argument("wilson: successes out of range");
  }
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  WilsonInterval w;
  w.center = (phat + z2 / (2.0 * n)) / denom;
  w.halfwidth = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  w.low = std::max(0.0, w.center - w.halfwidth);
  w.high = std::min(1.0, w.center + w.halfwidth);
  return w;
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(count + other.count);
  const double delta = other.mean - mean;
  m2 += other.m2 + delta * delta * static_cast<double>(count) *
                       static_cast<double>(other.count) / total;
  mean += delta * static_cast<double>(other.count) / total;
  count += other.count;
}

void IntCounter::merge(const IntCounter& other) {
  for (const auto& [v, c] : other.counts_) counts_[v] += c;
  total_ += other.total_;
}

double IntCounter::tv_against(const IntegerPmf& pmf) const {
  if (total_ == 0) throw std::invalid_argument("tv_against: empty counter");
  const long double n = static_cast<long double>(total_);
  long double l1 = 0.0L;
  long double seen_inside = 0.0L;
  for (const auto& [v, c] : counts_) {
    const long double emp = static_cast<long double>(c) / n;
    const long double exact = pmf.at(v);
    if (exact > 0.0L) {
      l1 += std::fabs(emp - exact);
      seen_inside += exact;
    } else {
      l1 += emp;  // empirical mass outside the oracle support
    }
  }
  // pmf mass at values never observed empirically.
  l1 += pmf.total_mass() - seen_inside;
  return static_cast<double>(l1 / 2.0L);
}

}  // namespace shuffleparity
