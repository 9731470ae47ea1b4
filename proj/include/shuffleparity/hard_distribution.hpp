#pragma once

#include <cstdint>
#include <optional>

#include "shuffleparity/point.hpp"
#include "shuffleparity/rng.hpp"

namespace shuffleparity {

// The tilted cube distribution over {-1,+1}^d: mass (1 + 2*alpha)*2^-d on
// points whose parity over ell equals b, mass (1 - 2*alpha)*2^-d otherwise.
// ell must be nonempty and alpha in [0, 1/2]; alpha = 0 is uniform, alpha =
// 1/2 puts all mass on one parity half-cube.
struct HardDistribution {
  int d = 0;
  uint32_t ell = 0;
  int8_t b = 1;
  double alpha = 0.0;
};

void validate_hard(const HardDistribution& p);

// Exact pmf at a full-support point. Throws on the pad point or a dimension
// mismatch.
double hard_pmf(const HardDistribution& p, const Point& x);

// One draw from the distribution. Draws x uniform on {-1,+1}^d, then with
// probability (1+2*alpha)/2 forces the parity over ell to b (else to -b) by
// flipping the minimum-index coordinate of ell when the product has the wrong
// sign. The flip is a fixed bijection between the two half-cubes, so
// uniformity within each half is preserved.
Point sample_hard(const HardDistribution& p, RngStream& rng);

// Parameter family: all (ell, b) with nonempty ell of cardinality <= k, both
// signs, at a shared tilt alpha.
struct HardFamily {
  int d = 0;
  int k = 0;
  double alpha = 0.0;

  uint64_t size() const;
};

void validate_family(const HardFamily& f);

// Uniform member of the family, via rank/unrank over the subset layers.
HardDistribution sample_family_member(const HardFamily& f, RngStream& rng);

// A distribution handle over {-1,+1}^d for generalization-error evaluation:
// either uniform or a HardDistribution tilt.
class CubeDistribution {
 public:
  static CubeDistribution uniform(int d);
  static CubeDistribution tilted(const HardDistribution& p);

  int dimension() const { return d_; }
  double pmf(const Point& x) const;
  Point sample(RngStream& rng) const;

 private:
  int d_ = 0;
  std::optional<HardDistribution> tilt_;
};

// Pr_{x ~ dist}[h(x) != c(x)] by exact enumeration of {-1,+1}^d. Requires
// d <= 20 so the full cube fits a single pass.
double generalization_error(const ParityConcept& c, const ParityConcept& h,
                            const CubeDistribution& dist);

// Monte Carlo estimate of the same quantity.
double generalization_error_mc(const ParityConcept& c, const ParityConcept& h,
                               const CubeDistribution& dist, int64_t trials,
                               RngStream& rng);

}  // namespace shuffleparity
