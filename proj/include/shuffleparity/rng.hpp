#pragma once

#include <cstdint>
#include <random>

namespace shuffleparity {

// SplitMix64 finalizer, used to derive stream keys.
constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// A deterministic tree of random streams. Every (seed, derivation path) pair
// names an independent stream, so trials, parties and counter tags can each be
// handed a fixed stream regardless of execution order or thread count.
// derive() only reads the key, never the engine state, so derived streams are
// unaffected by how much the parent has already been consumed.
class RngStream {
 public:
  explicit RngStream(uint64_t key) : key_(key) {
    std::seed_seq seq{splitmix64(key ^ 0x01ULL), splitmix64(key ^ 0x02ULL),
                      splitmix64(key ^ 0x03ULL), splitmix64(key ^ 0x04ULL)};
    engine_.seed(seq);
  }

  RngStream derive(uint64_t id) const {
    return RngStream(splitmix64(key_ ^ splitmix64(id + 0x51ed2701ULL)));
  }

  std::mt19937_64& engine() { return engine_; }

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  // Uniform integer in [lo, hi], inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(engine_);
  }

  bool bernoulli(double p) {
    return std::bernoulli_distribution(p)(engine_);
  }

  // Uniform sign in {-1, +1}.
  int8_t sign() { return (engine_() & 1ULL) ? int8_t{1} : int8_t{-1}; }

  uint64_t key() const { return key_; }

 private:
  uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace shuffleparity
