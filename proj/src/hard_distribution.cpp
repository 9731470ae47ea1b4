#include "shuffleparity/hard_distribution.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "shuffleparity/subsets.hpp"

namespace shuffleparity {

namespace {

int parity_sign(uint32_t ell, const Point& x) {
  return (std::popcount(ell & x.neg()) & 1) ? -1 : 1;
}

}  // namespace

void validate_hard(const HardDistribution& p) {
  if (p.d < 1 || p.d > kMaxDimension) {
    throw std::invalid_argument("HardDistribution: dimension must be in [1, 24]");
  }
  if (p.ell == 0) throw std::invalid_argument("HardDistribution: ell must be nonempty");
  if ((p.ell & ~Point::all_ones(p.d)) != 0) {
    throw std::invalid_argument("HardDistribution: ell outside dimension");
  }
  if (p.b != 1 && p.b != -1) throw std::invalid_argument("HardDistribution: sign must be +-1");
  if (!(p.alpha >= 0.0 && p.alpha <= 0.5)) {
    throw std::invalid_argument("HardDistribution: alpha must be in [0, 1/2]");
  }
}

double hard_pmf(const HardDistribution& p, const Point& x) {
  validate_hard(p);
  if (x.dimension() != p.d) throw std::invalid_argument("hard_pmf: dimension mismatch");
  if (!x.full_support()) throw std::invalid_argument("hard_pmf: point must be full-support");
  const double base = std::ldexp(1.0, -p.d);
  const double tilt = (parity_sign(p.ell, x) == p.b) ? (1.0 + 2.0 * p.alpha)
                                                     : (1.0 - 2.0 * p.alpha);
  return tilt * base;
}

Point sample_hard(const HardDistribution& p, RngStream& rng) {
  validate_hard(p);
  Point x = Point::uniform(p.d, rng);
  const int desired = rng.bernoulli((1.0 + 2.0 * p.alpha) / 2.0) ? p.b : -p.b;
  if (parity_sign(p.ell, x) != desired) {
    const uint32_t lowest = p.ell & (~p.ell + 1);
    x = Point::full(p.d, x.neg() ^ lowest);
  }
  return x;
}

void validate_family(const HardFamily& f) {
  if (f.d < 1 || f.d > kMaxDimension) {
    throw std::invalid_argument("HardFamily: dimension must be in [1, 24]");
  }
  if (f.k < 1 || f.k > f.d) throw std::invalid_argument("HardFamily: need 1 <= k <= d");
  if (!(f.alpha >= 0.0 && f.alpha <= 0.5)) {
    throw std::invalid_argument("HardFamily: alpha must be in [0, 1/2]");
  }
}

uint64_t HardFamily::size() const {
  validate_family(*this);
  return 2 * nonempty_subset_count(d, k);
}

HardDistribution sample_family_member(const HardFamily& f, RngStream& rng) {
  validate_family(f);
  HardDistribution p;
  p.d = f.d;
  p.alpha = f.alpha;
  p.ell = sample_nonempty_subset(f.d, f.k, rng);
  p.b = rng.sign();
  return p;
}

CubeDistribution CubeDistribution::uniform(int d) {
  if (d < 1 || d > kMaxDimension) {
    throw std::invalid_argument("CubeDistribution: dimension must be in [1, 24]");
  }
  CubeDistribution out;
  out.d_ = d;
  return out;
}

CubeDistribution CubeDistribution::tilted(const HardDistribution& p) {
  validate_hard(p);
  CubeDistribution out;
  out.d_ = p.d;
  out.tilt_ = p;
  return out;
}

double CubeDistribution::pmf(const Point& x) const {
  if (tilt_) return hard_pmf(*tilt_, x);
  if (x.dimension() != d_) throw std::invalid_argument("CubeDistribution: dimension mismatch");
  if (!x.full_support()) throw std::invalid_argument("CubeDistribution: point must be full-support");
  return std::ldexp(1.0, -d_);
}

Point CubeDistribution::sample(RngStream& rng) const {
  if (tilt_) return sample_hard(*tilt_, rng);
  return Point::uniform(d_, rng);
}

double generalization_error(const ParityConcept& c, const ParityConcept& h,
                            const CubeDistribution& dist) {
  validate_concept(c);
  validate_concept(h);
  if (c.d != h.d || c.d != dist.dimension()) {
    throw std::invalid_argument("generalization_error: dimension mismatch");
  }
  if (c.d > 20) {
    throw std::invalid_argument("generalization_error: exact mode needs d <= 20");
  }
  const uint32_t limit = Point::all_ones(c.d);
  double err = 0.0;
  for (uint32_t neg = 0;; ++neg) {
    const Point x = Point::full(c.d, neg);
    if (eval_parity(h, x) != eval_parity(c, x)) err += dist.pmf(x);
    if (neg == limit) break;
  }
  return err;
}

double generalization_error_mc(const ParityConcept& c, const ParityConcept& h,
                               const CubeDistribution& dist, int64_t trials,
                               RngStream& rng) {
  validate_concept(c);
  validate_concept(h);
  if (c.d != h.d || c.d != dist.dimension()) {
    throw std::invalid_argument("generalization_error_mc: dimension mismatch");
  }
  if (trials < 1) throw std::invalid_argument("generalization_error_mc: trials < 1");
  int64_t disagree = 0;
  for (int64_t t = 0; t < trials; ++t) {
    const Point x = dist.sample(rng);
    if (eval_parity(h, x) != eval_parity(c, x)) ++disagree;
  }
  return static_cast<double>(disagree) / static_cast<double>(trials);
}

}  // namespace shuffleparity
