#pragma once

#include <cstdint>
#include <vector>

#include "shuffleparity/rng.hpp"
#include "shuffleparity/shuffle.hpp"

namespace shuffleparity {

// Parameters of the one-round private counting protocol. Each of n parties
// submits its bit plus one noise share (a Polya(c/n, e^{-eps}) difference),
// additively split into `splits` messages modulo q. With all parties honest
// the analyzer's output is Sum a_i plus a c-fold Discrete Laplace(eps) draw;
// c = 3 keeps a full Discrete Laplace term alive with only n/3 honest parties.
struct CountingConfig {
  int64_t n = 0;
  double eps = 1.0;
  int c = 3;
  int splits = 1;
  int64_t q = 0;
  bool noise_enabled = true;  // test hook; disables the Polya share

  // q defaults to the smallest prime above 8n + 400/eps, which keeps
  // wraparound of bit-sum plus noise astronomically unlikely.
  static CountingConfig make(int64_t n, double eps, int c = 3, int splits = 1);
  void validate() const;
};

int64_t next_prime_above(int64_t x);

// Centered representative of v mod q in (-q/2, q/2].
int64_t centered_mod(int64_t v, int64_t q);

// One party's messages for bit a on the given counter tag; cfg must already
// be validated. Draw order: the plus Polya draw, the minus Polya draw, then
// splits-1 uniform share values.
std::vector<Message> randomize_bit(int a, const CountingConfig& cfg, uint32_t tag,
                                   RngStream& rng);

// Same messages plus the party's clear pre-split value a + plus - minus.
// Simulation-side only; lets harnesses count wraparound events, which the
// analyzer itself cannot observe.
struct RandomizedBit {
  int64_t clear_value = 0;
  std::vector<Message> messages;
};
RandomizedBit randomize_bit_traced(int a, const CountingConfig& cfg, uint32_t tag,
                                   RngStream& rng);

// Recovers the centered sum for a single counter tag. The bag must not hold
// messages for any other tag. An empty bag yields 0.
int64_t analyze_count(const MessageBag& bag, const CountingConfig& cfg, uint32_t tag = 0);

// Per-tag centered sums for tags 0..num_tags-1.
std::vector<int64_t> analyze_counts(const MessageBag& bag, const CountingConfig& cfg,
                                    uint32_t num_tags);

}  // namespace shuffleparity
