#include "shuffleparity/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace shuffleparity {

double dlap_pmf(double eps, int64_t i) {
  if (!(eps > 0.0)) throw std::invalid_argument("dlap_pmf: eps must be positive");
  const double p = std::exp(-eps);
  return (1.0 - p) / (1.0 + p) * std::exp(-eps * static_cast<double>(std::llabs(i)));
}

double dlap_variance(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("dlap_variance: eps must be positive");
  const double p = std::exp(-eps);
  return 2.0 * p / ((1.0 - p) * (1.0 - p));
}

int64_t sample_polya(const PolyaParams& params, RngStream& rng) {
  if (!(params.shape > 0.0)) throw std::invalid_argument("sample_polya: shape must be positive");
  if (!(params.p > 0.0 && params.p < 1.0)) {
    throw std::invalid_argument("sample_polya: p must be in (0, 1)");
  }
  std::gamma_distribution<double> gamma(params.shape, params.p / (1.0 - params.p));
  const double g = gamma(rng.engine());
  if (!(g > 0.0)) return 0;  // shape << 1 underflows to an exact zero rate
  std::poisson_distribution<int64_t> poisson(g);
  return poisson(rng.engine());
}

NoiseShare draw_share(double shape, double p, RngStream& rng) {
  const PolyaParams params{shape, p};
  NoiseShare share;
  share.plus = sample_polya(params, rng);
  share.minus = sample_polya(params, rng);
  return share;
}

std::vector<NoiseShare> make_shares(int64_t n, double eps, int c, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("make_shares: need n >= 1");
  if (c < 1) throw std::invalid_argument("make_shares: need c >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("make_shares: eps must be positive");
  const double shape = static_cast<double>(c) / static_cast<double>(n);
  const double p = std::exp(-eps);
  std::vector<NoiseShare> shares(static_cast<size_t>(n));
  for (auto& share : shares) share = draw_share(shape, p, rng);
  return shares;
}

double sample_lap(double scale, RngStream& rng) {
  if (!(scale > 0.0)) throw std::invalid_argument("sample_lap: scale must be positive");
  const double u = rng.uniform01() - 0.5;
  double a = 1.0 - 2.0 * std::abs(u);
  if (a <= 0.0) a = std::numeric_limits<double>::min();
  return (u < 0.0 ? 1.0 : -1.0) * scale * std::log(a);
}

long double IntegerPmf::total_mass() const {
  long double sum = 0.0L;
  for (const long double m : mass) sum += m;
  return sum;
}

long double IntegerPmf::variance() const {
  long double mean = 0.0L;
  for (size_t j = 0; j < mass.size(); ++j) {
    mean += mass[j] * static_cast<long double>(min_value + static_cast<int64_t>(j));
  }
  long double var = 0.0L;
  for (size_t j = 0; j < mass.size(); ++j) {
    const long double x = static_cast<long double>(min_value + static_cast<int64_t>(j)) - mean;
    var += mass[j] * x * x;
  }
  return var;
}

IntegerPmf dlap_truncated_pmf(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("dlap_truncated_pmf: eps must be positive");
  // Base radius 60 * max(1, 1/eps) keeps the discarded tail below 1e-12; the
  // extra 100 keeps convolution edge artifacts out of the |i| <= 100 window
  // where the unit-shift ratio is asserted to be exact.
  const int64_t cutoff =
      static_cast<int64_t>(std::ceil(60.0 * std::max(1.0, 1.0 / eps))) + 100;
  const long double p = std::exp(static_cast<long double>(-eps));
  const long double norm = (1.0L - p) / (1.0L + p);
  IntegerPmf pmf;
  pmf.min_value = -cutoff;
  pmf.mass.resize(static_cast<size_t>(2 * cutoff + 1));
  for (int64_t i = -cutoff; i <= cutoff; ++i) {
    pmf.mass[static_cast<size_t>(i + cutoff)] =
        norm * std::exp(static_cast<long double>(-eps) * std::llabs(i));
  }
  return pmf;
}

IntegerPmf convolve(const IntegerPmf& a, const IntegerPmf& b) {
  IntegerPmf out;
  out.min_value = a.min_value + b.min_value;
  out.mass.assign(a.mass.size() + b.mass.size() - 1, 0.0L);
  for (size_t i = 0; i < a.mass.size(); ++i) {
    if (a.mass[i] == 0.0L) continue;
    for (size_t j = 0; j < b.mass.size(); ++j) {
      out.mass[i + j] += a.mass[i] * b.mass[j];
    }
  }
  return out;
}

IntegerPmf dlap_convolution_pmf(double eps, int c) {
  if (c < 1) throw std::invalid_argument("dlap_convolution_pmf: need c >= 1");
  const IntegerPmf base = dlap_truncated_pmf(eps);
  IntegerPmf out = base;
  for (int fold = 1; fold < c; ++fold) out = convolve(out, base);
  return out;
}

long double max_shift_ratio(const IntegerPmf& pmf, int64_t range) {
  long double worst = 0.0L;
  for (int64_t i = -range; i < range; ++i) {
    const long double here = pmf.at(i);
    const long double next = pmf.at(i + 1);
    if (here > 0.0L && next > 0.0L) {
      const long double r = here > next ? here / next : next / here;
      if (r > worst) worst = r;
    }
  }
  return worst;
}

}  // namespace shuffleparity
