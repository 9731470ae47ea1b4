#include "shuffleparity/counting.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shuffleparity/noise.hpp"

namespace shuffleparity {

int64_t next_prime_above(int64_t x) {
  int64_t candidate = x + 1;
  if (candidate < 2) return 2;
  while (true) {
    bool prime = candidate >= 2 && (candidate == 2 || candidate % 2 != 0);
    for (int64_t f = 3; prime && f * f <= candidate; f += 2) {
      if (candidate % f == 0) prime = false;
    }
    if (prime) return candidate;
    ++candidate;
  }
}

CountingConfig CountingConfig::make(int64_t n, double eps, int c, int splits) {
  CountingConfig cfg;
  cfg.n = n;
  cfg.eps = eps;
  cfg.c = c;
  cfg.splits = splits;
  if (!(eps > 0.0)) throw std::invalid_argument("CountingConfig: eps must be positive");
  cfg.q = next_prime_above(static_cast<int64_t>(
      std::ceil(8.0 * static_cast<double>(n) + 400.0 / eps)));
  cfg.validate();
  return cfg;
}

void CountingConfig::validate() const {
  if (n < 1) throw std::invalid_argument("CountingConfig: need n >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("CountingConfig: eps must be positive");
  if (c < 1) throw std::invalid_argument("CountingConfig: need c >= 1");
  if (splits < 1) throw std::invalid_argument("CountingConfig: need splits >= 1");
  // Keeps value * multiplicity products inside int64 during analysis.
  if (q > std::numeric_limits<int32_t>::max()) {
    throw std::invalid_argument("CountingConfig: q too large for the message alphabet");
  }
  // Expected magnitude of one party's Polya-difference share: both draws have
  // mean (c/n) * p / (1 - p).
  const double p = std::exp(-eps);
  const double per_party = 2.0 * (static_cast<double>(c) / static_cast<double>(n)) *
                           p / (1.0 - p);
  if (static_cast<double>(q) <= static_cast<double>(n) * (1.0 + per_party)) {
    throw std::invalid_argument("CountingConfig: q too small for n plus expected noise");
  }
}

int64_t centered_mod(int64_t v, int64_t q) {
  int64_t r = v % q;
  if (r < 0) r += q;
  return (2 * r > q) ? r - q : r;
}

std::vector<Message> randomize_bit(int a, const CountingConfig& cfg, uint32_t tag,
                                   RngStream& rng) {
  return randomize_bit_traced(a, cfg, tag, rng).messages;
}

RandomizedBit randomize_bit_traced(int a, const CountingConfig& cfg, uint32_t tag,
                                   RngStream& rng) {
  if (a != 0 && a != 1) throw std::invalid_argument("randomize_bit: input must be a bit");
  int64_t v = a;
  if (cfg.noise_enabled) {
    const NoiseShare share =
        draw_share(static_cast<double>(cfg.c) / static_cast<double>(cfg.n),
                   std::exp(-cfg.eps), rng);
    v += share.value();
  }
  int64_t residue = v % cfg.q;
  if (residue < 0) residue += cfg.q;

  RandomizedBit out;
  out.clear_value = v;
  out.messages.reserve(static_cast<size_t>(cfg.splits));
  int64_t running = 0;
  for (int s = 0; s + 1 < cfg.splits; ++s) {
    const int64_t share_value = rng.uniform_int(0, cfg.q - 1);
    running = (running + share_value) % cfg.q;
    out.messages.push_back(Message{tag, static_cast<uint32_t>(share_value)});
  }
  const int64_t last = ((residue - running) % cfg.q + cfg.q) % cfg.q;
  out.messages.push_back(Message{tag, static_cast<uint32_t>(last)});
  return out;
}

int64_t analyze_count(const MessageBag& bag, const CountingConfig& cfg, uint32_t tag) {
  cfg.validate();
  int64_t sum = 0;
  bag.for_each([&](uint32_t t, uint32_t value, uint64_t mult) {
    if (t != tag) throw std::invalid_argument("analyze_count: bag holds a foreign tag");
    sum = (sum + static_cast<int64_t>(value) * static_cast<int64_t>(mult % cfg.q)) % cfg.q;
  });
  return centered_mod(sum, cfg.q);
}

std::vector<int64_t> analyze_counts(const MessageBag& bag, const CountingConfig& cfg,
                                    uint32_t num_tags) {
  cfg.validate();
  std::vector<int64_t> sums(num_tags, 0);
  bag.for_each([&](uint32_t t, uint32_t value, uint64_t mult) {
    if (t >= num_tags) throw std::invalid_argument("analyze_counts: tag out of range");
    int64_t& sum = sums[t];
    sum = (sum + static_cast<int64_t>(value) * static_cast<int64_t>(mult % cfg.q)) % cfg.q;
  });
  for (int64_t& sum : sums) sum = centered_mod(sum, cfg.q);
  return sums;
}

}  // namespace shuffleparity
