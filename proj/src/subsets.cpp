#include "shuffleparity/subsets.hpp"

#include <array>
#include <stdexcept>

namespace shuffleparity {

namespace {

constexpr int kMaxN = 63;

struct PascalTable {
  std::array<std::array<uint64_t, kMaxN + 1>, kMaxN + 1> c{};
  constexpr PascalTable() {
    for (int n = 0; n <= kMaxN; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) {
        c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
      }
    }
  }
};

constexpr PascalTable kPascal{};

}  // namespace

uint64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxN) throw std::invalid_argument("binomial: n out of range");
  if (k < 0 || k > n) return 0;
  return kPascal.c[n][k];
}

uint64_t binomial_sum(int d, int k) {
  if (d < 0 || d > kMaxN) throw std::invalid_argument("binomial_sum: d out of range");
  uint64_t total = 0;
  const int cap = k < d ? k : d;
  for (int j = 0; j <= cap; ++j) total += kPascal.c[d][j];
  return total;
}

uint64_t nonempty_subset_count(int d, int k) {
  return binomial_sum(d, k) - 1;
}

uint32_t unrank_combination(int d, int j, uint64_t rank) {
  if (d < 0 || d > 32 || j < 0 || j > d) {
    throw std::invalid_argument("unrank_combination: bad dimensions");
  }
  if (rank >= binomial(d, j)) {
    throw std::invalid_argument("unrank_combination: rank out of range");
  }
  uint32_t mask = 0;
  int remaining = j;
  for (int e = 0; e < d && remaining > 0; ++e) {
    // Number of j-subsets that contain element e as their smallest remaining
    // choice equals C(d-1-e, remaining-1).
    const uint64_t with_e = binomial(d - 1 - e, remaining - 1);
    if (rank < with_e) {
      mask |= 1u << e;
      --remaining;
    } else {
      rank -= with_e;
    }
  }
  return mask;
}

uint32_t sample_nonempty_subset(int d, int k, RngStream& rng) {
  if (d < 1 || k < 1) throw std::invalid_argument("sample_nonempty_subset: need d,k >= 1");
  const int cap = k < d ? k : d;
  const uint64_t total = nonempty_subset_count(d, cap);
  uint64_t rank = static_cast<uint64_t>(rng.uniform_int(0, static_cast<int64_t>(total) - 1));
  for (int j = 1; j <= cap; ++j) {
    const uint64_t layer = binomial(d, j);
    if (rank < layer) return unrank_combination(d, j, rank);
    rank -= layer;
  }
  throw std::logic_error("sample_nonempty_subset: rank walk overflow");
}

uint32_t erase_mask_index(uint32_t mask, int i) {
  const uint32_t low = mask & ((1u << i) - 1);
  const uint32_t high = (mask >> (i + 1)) << i;
  return low | high;
}

uint32_t reinsert_mask_index(uint32_t mask, int i) {
  const uint32_t low = mask & ((1u << i) - 1);
  const uint32_t high = (mask >> i) << (i + 1);
  return low | high;
}

}  // namespace shuffleparity
