#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "shuffleparity/counting.hpp"
#include "shuffleparity/noise.hpp"
#include "shuffleparity/parallel.hpp"
#include "shuffleparity/rng.hpp"
#include "shuffleparity/stats.hpp"

namespace shuffleparity {
namespace {

TEST(CountingConfig, DefaultModulusIsSmallestPrimeAboveBound) {
  // 8n + 400/eps: 480 -> 487, 408 -> 409, 1200 -> 1201.
  EXPECT_EQ(CountingConfig::make(10, 1.0).q, 487);
  EXPECT_EQ(CountingConfig::make(1, 1.0).q, 409);
  EXPECT_EQ(CountingConfig::make(50, 0.5).q, 1201);
  EXPECT_EQ(next_prime_above(1), 2);
  EXPECT_EQ(next_prime_above(7), 11);
}

TEST(CountingConfig, ValidatesModulusAgainstNoiseBound) {
  CountingConfig cfg = CountingConfig::make(10, 1.0);
  cfg.q = 11;  // far below n * (1 + expected noise)
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = CountingConfig::make(10, 1.0);
  cfg.splits = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(CountingConfig::make(0, 1.0), std::invalid_argument);
  EXPECT_THROW(CountingConfig::make(10, -1.0), std::invalid_argument);
}

TEST(CenteredMod, RepresentativeRange) {
  EXPECT_EQ(centered_mod(0, 97), 0);
  EXPECT_EQ(centered_mod(48, 97), 48);
  EXPECT_EQ(centered_mod(49, 97), -48);
  EXPECT_EQ(centered_mod(96, 97), -1);
  EXPECT_EQ(centered_mod(-1, 97), -1);
  EXPECT_EQ(centered_mod(97 * 5 + 3, 97), 3);
  // Even modulus: q/2 stays inside (-q/2, q/2].
  EXPECT_EQ(centered_mod(5, 10), 5);
  EXPECT_EQ(centered_mod(6, 10), -4);
}

TEST(RandomizeBit, SingleMessageCarriesBitPlusShare) {
  const CountingConfig cfg = CountingConfig::make(10, 1.0, 3, 1);
  for (uint64_t seed = 0; seed < 200; ++seed) {
    RngStream rng_a(seed);
    const std::vector<Message> messages = randomize_bit(1, cfg, 7, rng_a);
    ASSERT_EQ(messages.size(), 1u);
    EXPECT_EQ(messages[0].tag, 7u);
    // Twin stream: the share draw order is plus then minus.
    RngStream rng_b(seed);
    const NoiseShare share = draw_share(3.0 / 10.0, std::exp(-1.0), rng_b);
    const int64_t v = 1 + share.value();
    EXPECT_EQ(messages[0].value,
              static_cast<uint32_t>(((v % cfg.q) + cfg.q) % cfg.q));
  }
}

TEST(RandomizeBit, SplitsSumToClearValueModQ) {
  const CountingConfig cfg = CountingConfig::make(8, 0.7, 3, 5);
  RngStream rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int a = trial % 2;
    const RandomizedBit rb = randomize_bit_traced(a, cfg, 0, rng);
    ASSERT_EQ(rb.messages.size(), 5u);
    int64_t sum = 0;
    for (const Message& m : rb.messages) sum = (sum + m.value) % cfg.q;
    EXPECT_EQ(sum, ((rb.clear_value % cfg.q) + cfg.q) % cfg.q);
  }
}

TEST(RandomizeBit, RejectsNonBitInput) {
  const CountingConfig cfg = CountingConfig::make(4, 1.0);
  RngStream rng(42);
  EXPECT_THROW(randomize_bit(2, cfg, 0, rng), std::invalid_argument);
}

TEST(RandomizeBit, SplitSharesAreMarginallyUniform) {
  // splits = 3, v forced to 0 by disabling noise and sending a zero bit,
  // q = 97: shares sum to zero while each is marginally uniform.
  CountingConfig cfg = CountingConfig::make(10, 1.0, 3, 3);
  cfg.q = 97;
  cfg.noise_enabled = false;
  RngStream rng(43);
  const int64_t trials = 100000;
  std::vector<int64_t> freq(97, 0);
  for (int64_t trial = 0; trial < trials; ++trial) {
    const std::vector<Message> messages = randomize_bit(0, cfg, 0, rng);
    int64_t sum = 0;
    for (const Message& m : messages) sum = (sum + m.value) % cfg.q;
    ASSERT_EQ(sum, 0);
    ++freq[messages[0].value];
  }
  const double p = 1.0 / 97.0;
  const double expected = static_cast<double>(trials) * p;
  const double sigma = std::sqrt(static_cast<double>(trials) * p * (1.0 - p));
  for (int v = 0; v < 97; ++v) {
    EXPECT_NEAR(static_cast<double>(freq[static_cast<size_t>(v)]), expected,
                3.0 * sigma)
        << "value " << v;
  }
}

TEST(AnalyzeCount, AllZeroBitsNoNoiseGivesZero) {
  CountingConfig cfg = CountingConfig::make(16, 1.0);
  cfg.noise_enabled = false;
  RngStream rng(44);
  MessageBag bag;
  for (int64_t i = 0; i < cfg.n; ++i) bag.add_all(randomize_bit(0, cfg, 0, rng));
  EXPECT_EQ(analyze_count(bag, cfg, 0), 0);
  EXPECT_EQ(analyze_count(MessageBag{}, cfg, 0), 0);  // empty bag
}

TEST(AnalyzeCount, ExactSumRecoveryWithNoiseDisabled) {
  RngStream rng(45);
  for (int trial = 0; trial < 1000; ++trial) {
    const int64_t n = rng.uniform_int(1, 64);
    CountingConfig cfg = CountingConfig::make(n, 1.0, 3,
                                              static_cast<int>(rng.uniform_int(1, 3)));
    cfg.noise_enabled = false;
    MessageBag bag;
    int64_t true_sum = 0;
    for (int64_t i = 0; i < n; ++i) {
      const int a = static_cast<int>(rng.uniform_int(0, 1));
      true_sum += a;
      bag.add_all(randomize_bit(a, cfg, 0, rng));
    }
    EXPECT_EQ(analyze_count(bag, cfg, 0), true_sum);
  }
}

TEST(AnalyzeCount, RejectsForeignTags) {
  const CountingConfig cfg = CountingConfig::make(4, 1.0);
  MessageBag bag;
  bag.add(Message{1, 5});
  EXPECT_THROW(analyze_count(bag, cfg, 0), std::invalid_argument);
  EXPECT_THROW(analyze_counts(bag, cfg, 1), std::invalid_argument);
}

TEST(AnalyzeCount, NoiseLawMatchesConvolutionOracle) {
  const CountingConfig cfg = CountingConfig::make(10, 1.0, 3, 1);
  const IntegerPmf oracle = dlap_convolution_pmf(1.0, 3);
  const int64_t trials = 100000;
  const std::vector<int64_t> noise = run_trials<int64_t>(
      trials, RngStream(46),
      [&](int64_t, RngStream& stream) {
        MessageBag bag;
        for (int64_t i = 0; i < cfg.n; ++i) bag.add_all(randomize_bit(1, cfg, 0, stream));
        return analyze_count(bag, cfg, 0) - cfg.n;
      });
  IntCounter counter;
  for (const int64_t v : noise) counter.add(v);
  EXPECT_LE(counter.tv_against(oracle), 0.02);
}

TEST(AnalyzeCount, DroppedThirdKeepsDominatingResidualNoise) {
  // 2n/3 honest parties with shape 3/n leave a 2-fold Discrete Laplace sum;
  // its variance must at least reach a single Discrete Laplace term.
  const CountingConfig cfg = CountingConfig::make(12, 1.0, 3, 1);
  const int64_t trials = 100000;
  const std::vector<int64_t> residuals = run_trials<int64_t>(
      trials, RngStream(47),
      [&](int64_t, RngStream& stream) {
        const PartyStatus status = PartyStatus::with_dropouts(
            static_cast<size_t>(cfg.n), static_cast<size_t>(cfg.n / 3), stream);
        MessageBag bag;
        int64_t honest_sum = 0;
        for (int64_t i = 0; i < cfg.n; ++i) {
          if (!status.honest[static_cast<size_t>(i)]) continue;
          honest_sum += 1;
          bag.add_all(randomize_bit(1, cfg, 0, stream));
        }
        return analyze_count(bag, cfg, 0) - honest_sum;
      });
  RunningMoments moments;
  for (const int64_t r : residuals) moments.add(static_cast<double>(r));
  const double single = dlap_variance(1.0);
  EXPECT_GE(moments.variance(), 0.95 * single);
  // The exact residual law is the 2-fold convolution.
  IntCounter counter;
  for (const int64_t r : residuals) counter.add(r);
  EXPECT_LE(counter.tv_against(dlap_convolution_pmf(1.0, 2)), 0.02);
}

TEST(AnalyzeCount, NeighboringInputsShiftOutputByOne) {
  // Same randomness, one flipped bit: the analyzer output moves by exactly 1,
  // so the output laws of neighboring inputs are unit shifts of each other.
  const CountingConfig cfg = CountingConfig::make(10, 1.0, 3, 2);
  for (uint64_t seed = 100; seed < 200; ++seed) {
    const auto run_with_first_bit = [&](int first_bit) {
      RngStream rng(seed);
      MessageBag bag;
      for (int64_t i = 0; i < cfg.n; ++i) {
        bag.add_all(randomize_bit(i == 0 ? first_bit : 1, cfg, 0, rng));
      }
      return analyze_count(bag, cfg, 0);
    };
    EXPECT_EQ(run_with_first_bit(1), run_with_first_bit(0) + 1);
  }
  // The unit-shift pointwise ratio of the noise law stays within e^eps.
  const IntegerPmf oracle = dlap_convolution_pmf(1.0, 3);
  EXPECT_LE(static_cast<double>(max_shift_ratio(oracle, 100)),
            std::exp(1.0) * (1.0 + 1e-9));
}

}  // namespace
}  // namespace shuffleparity
