#pragma once

#include <cstdint>
#include <vector>

#include "shuffleparity/rng.hpp"

namespace shuffleparity {

inline constexpr int kMaxDimension = 24;

// A point of {-1, 0, +1}^d, stored as two bitmasks so parity products reduce
// to popcounts. Bit i of support() is set when coordinate i is nonzero; bit i
// of neg() is set when coordinate i is -1 (neg is always a subset of support).
// Data points are full-support; the all-zero point is the pad.
class Point {
 public:
  Point(int d, uint32_t support, uint32_t neg);

  // The pad point 0^d.
  static Point pad(int d);
  // A point of {-1,+1}^d: coordinate i is -1 iff bit i of neg is set.
  static Point full(int d, uint32_t neg);
  static Point from_coords(const std::vector<int>& coords);
  // Uniform on {-1,+1}^d.
  static Point uniform(int d, RngStream& rng);

  int dimension() const { return d_; }
  // Coordinate value in {-1, 0, +1}; i is 0-based.
  int coord(int i) const;
  bool full_support() const { return support_ == all_ones(d_); }
  bool is_pad() const { return support_ == 0; }
  uint32_t support() const { return support_; }
  uint32_t neg() const { return neg_; }
  std::vector<int> coords() const;

  // The same point with coordinate i removed (dimension drops by one).
  Point erase_coord(int i) const;

  bool operator==(const Point&) const = default;

  static uint32_t all_ones(int d) { return (d == 32) ? ~0u : ((1u << d) - 1); }

 private:
  int d_;
  uint32_t support_;
  uint32_t neg_;
};

// A parity predicate b * prod_{i in r} x_i over {-1,+1}^d. r is a bitmask
// subset of the d coordinates and may be empty; b is +-1.
struct ParityConcept {
  int d = 0;
  uint32_t r = 0;
  int8_t b = 1;

  bool operator==(const ParityConcept&) const = default;
};

// Throws unless the concept is well formed for its dimension.
void validate_concept(const ParityConcept& c);

// Evaluates b * prod_{i in r, x_i != 0} x_i. Zero coordinates are skipped, so
// the pad point evaluates to b under every concept; on full-support points
// this is the plain parity product.
int eval_parity(const ParityConcept& c, const Point& x);

struct LabeledExample {
  Point x = Point::pad(1);
  int8_t y = 1;  // always +-1, including for the pad point
};

}  // namespace shuffleparity
