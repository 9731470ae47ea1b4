#include "shuffleparity/point.hpp"

#include <bit>
#include <stdexcept>

#include "shuffleparity/subsets.hpp"

namespace shuffleparity {

Point::Point(int d, uint32_t support, uint32_t neg) : d_(d), support_(support), neg_(neg) {
  if (d < 1 || d > kMaxDimension) {
    throw std::invalid_argument("Point: dimension must be in [1, 24]");
  }
  if ((support & ~all_ones(d)) != 0) {
    throw std::invalid_argument("Point: support outside dimension");
  }
  if ((neg & ~support) != 0) {
    throw std::invalid_argument("Point: negative coordinate outside support");
  }
}

Point Point::pad(int d) { return Point(d, 0, 0); }

Point Point::full(int d, uint32_t neg) { return Point(d, all_ones(d), neg); }

Point Point::from_coords(const std::vector<int>& coords) {
  const int d = static_cast<int>(coords.size());
  uint32_t support = 0;
  uint32_t neg = 0;
  for (int i = 0; i < d; ++i) {
    if (coords[i] == 0) continue;
    if (coords[i] != 1 && coords[i] != -1) {
      throw std::invalid_argument("Point: coordinates must be -1, 0 or +1");
    }
    support |= 1u << i;
    if (coords[i] == -1) neg |= 1u << i;
  }
  return Point(d, support, neg);
}

Point Point::uniform(int d, RngStream& rng) {
  return full(d, static_cast<uint32_t>(rng.next_u64()) & all_ones(d));
}

int Point::coord(int i) const {
  if (i < 0 || i >= d_) throw std::out_of_range("Point: coordinate index");
  const uint32_t bit = 1u << i;
  if (!(support_ & bit)) return 0;
  return (neg_ & bit) ? -1 : 1;
}

std::vector<int> Point::coords() const {
  std::vector<int> out(static_cast<size_t>(d_));
  for (int i = 0; i < d_; ++i) out[static_cast<size_t>(i)] = coord(i);
  return out;
}

Point Point::erase_coord(int i) const {
  if (i < 0 || i >= d_) throw std::out_of_range("Point: coordinate index");
  if (d_ < 2) throw std::invalid_argument("Point: cannot erase from dimension 1");
  return Point(d_ - 1, erase_mask_index(support_, i), erase_mask_index(neg_, i));
}

void validate_concept(const ParityConcept& c) {
  if (c.d < 1 || c.d > kMaxDimension) {
    throw std::invalid_argument("ParityConcept: dimension must be in [1, 24]");
  }
  if ((c.r & ~Point::all_ones(c.d)) != 0) {
    throw std::invalid_argument("ParityConcept: subset outside dimension");
  }
  if (c.b != 1 && c.b != -1) {
    throw std::invalid_argument("ParityConcept: sign must be +-1");
  }
}

int eval_parity(const ParityConcept& c, const Point& x) {
  if (c.d != x.dimension()) {
    throw std::invalid_argument("eval_parity: dimension mismatch");
  }
  // Coordinates outside the support contribute nothing; each -1 inside the
  // support flips the sign once.
  const int flips = std::popcount(c.r & x.neg());
  return (flips & 1) ? -c.b : c.b;
}

}  // namespace shuffleparity
