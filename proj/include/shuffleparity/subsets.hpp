#pragma once

#include <cstdint>

#include "shuffleparity/rng.hpp"

namespace shuffleparity {

// Binomial coefficient C(n, k) for 0 <= n <= 63; overflow-free for the
// dimensions this library supports.
uint64_t binomial(int n, int k);

// Sum of C(d, j) for 0 <= j <= min(k, d), i.e. the number of subsets of [d]
// with cardinality at most k.
uint64_t binomial_sum(int d, int k);

// Number of nonempty subsets of [d] with cardinality at most k.
uint64_t nonempty_subset_count(int d, int k);

// The rank-th j-element subset of {0,...,d-1} in lexicographic order of the
// sorted element lists. rank must lie in [0, C(d, j)).
uint32_t unrank_combination(int d, int j, uint64_t rank);

// Uniform nonempty subset of {0,...,d-1} with cardinality at most k, realized
// by drawing a uniform rank in the combinatorial number system. Exactly
// uniform, no rejection.
uint32_t sample_nonempty_subset(int d, int k, RngStream& rng);

// Remove position i from a bitmask over d coordinates: bits above i shift
// down by one. The result is a mask over d-1 coordinates.
uint32_t erase_mask_index(uint32_t mask, int i);

// Inverse of erase_mask_index: bits at positions >= i shift up by one and
// position i is left clear.
uint32_t reinsert_mask_index(uint32_t mask, int i);

}  // namespace shuffleparity
