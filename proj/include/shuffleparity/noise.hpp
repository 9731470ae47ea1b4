#pragma once

#include <cstdint>
#include <vector>

#include "shuffleparity/rng.hpp"

namespace shuffleparity {

// Exact pmf of the Discrete Laplace distribution with parameter eps: mass at
// integer i proportional to e^{-eps*|i|}, normalized by
// (1 - e^{-eps}) / (1 + e^{-eps}).
double dlap_pmf(double eps, int64_t i);

// Variance of one Discrete Laplace draw: 2*e^{-eps} / (1 - e^{-eps})^2.
double dlap_variance(double eps);

// Polya (negative binomial with real-valued shape) parameters. In the
// counting protocol p = e^{-eps} and shape = c/n.
struct PolyaParams {
  double shape = 1.0;  // > 0, possibly non-integer
  double p = 0.5;      // in (0, 1)
};

// One Polya draw via the Gamma-Poisson mixture: G ~ Gamma(shape,
// scale = p/(1-p)), then Poisson(G). Handles real-valued shape directly.
int64_t sample_polya(const PolyaParams& params, RngStream& rng);

// One party's contribution to a distributed Discrete Laplace sample: a pair
// of independent Polya draws whose difference is the party's noise term.
struct NoiseShare {
  int64_t plus = 0;
  int64_t minus = 0;

  int64_t value() const { return plus - minus; }
};

NoiseShare draw_share(double shape, double p, RngStream& rng);

// Shares for n parties with per-party Polya shape c/n and p = e^{-eps}. The
// sum of all n share values is distributed as the sum of c independent
// Discrete Laplace(eps) draws; c = 1 is the plain protocol, c = 3 the
// 1/3-robust variant.
std::vector<NoiseShare> make_shares(int64_t n, double eps, int c, RngStream& rng);

// Continuous Laplace draw, mean 0, the given scale parameter.
double sample_lap(double scale, RngStream& rng);

// A pmf over a contiguous integer range, used as the exact distribution
// oracle for noise checks.
struct IntegerPmf {
  int64_t min_value = 0;
  std::vector<long double> mass;

  int64_t max_value() const {
    return min_value + static_cast<int64_t>(mass.size()) - 1;
  }
  long double at(int64_t i) const {
    if (i < min_value || i > max_value()) return 0.0L;
    return mass[static_cast<size_t>(i - min_value)];
  }
  long double total_mass() const;
  long double variance() const;
};

// Discrete Laplace pmf truncated at |i| <= ceil(60 * max(1, 1/eps)); the
// discarded tail is below 1e-12 for any eps > 0 by the geometric tail bound.
IntegerPmf dlap_truncated_pmf(double eps);

IntegerPmf convolve(const IntegerPmf& a, const IntegerPmf& b);

// Exact c-fold convolution of the truncated Discrete Laplace pmf.
IntegerPmf dlap_convolution_pmf(double eps, int c);

// max over |i| <= range of pmf(i) / pmf(i+1) and pmf(i+1) / pmf(i); the
// pointwise privacy ratio of a noise pmf under a unit shift.
long double max_shift_ratio(const IntegerPmf& pmf, int64_t range);

}  // namespace shuffleparity
