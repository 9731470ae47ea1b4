#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shuffleparity/hard_distribution.hpp"
#include "shuffleparity/learner.hpp"
#include "shuffleparity/point.hpp"
#include "shuffleparity/shuffle.hpp"
#include "shuffleparity/stats.hpp"

namespace shuffleparity {

// Test hooks for the reduction pipelines. Production runs leave everything
// unset; the harness uses them to condition on the pad-label guess, pin the
// online sample count, pin the erased coordinate, or replace the inner
// learner by a constant-output stub.
struct ReductionHooks {
  std::optional<int64_t> forced_n_prime;
  std::optional<int8_t> forced_b_hat;
  std::optional<int> forced_i_star;
  bool stub_learner = false;
};

// Configuration of the pan-private reduction around the inner shuffle
// learner: n is the inner learner's total party budget and must be divisible
// by 3 (one third each of prefix padding, online phase, suffix padding).
// eps is the inner per-counter budget.
struct ReductionConfig {
  int64_t n = 0;
  int d = 0;
  int k = 0;
  double eps = 1.0;
  int c = 3;
  int splits = 1;
  bool noise_enabled = true;

  static ReductionConfig make(int d, int k, int64_t n, double eps);
  void validate() const;
  // The inner learner over the reduction's own dimension.
  LearnerConfig inner_learner() const;
  // The inner learner after one coordinate has been erased: dimension d-1,
  // weight bound min(k-1, d-1).
  ReductionConfig erased() const;
};

struct ReductionResult {
  ParityConcept hypothesis;
  int8_t b_hat = 1;
  int64_t n_prime = 0;
  LearnResult inner;
  ExecutionTranscript transcript;
};

// The uniform-distribution pan-private parity learner built from the inner
// shuffle learner: pads both ends of the stream with (0^d, b_hat), admits a
// Binomial(n, 2/9) prefix of the real labeled examples (capped at n/3, excess
// examples are never read), and applies the inner randomizers in a freshly
// drawn random index order. All intermediate states are available for
// probing under RecordMode::kAllStates.
ReductionResult learn_par_unif(const std::vector<LabeledExample>& labeled,
                               const ReductionConfig& cfg, RngStream& rng,
                               const ReductionHooks& hooks = {},
                               RecordMode record = RecordMode::kFinalState);

// The labeled examples the identifier feeds its learner: label = the erased
// coordinate's value, point = the remaining d-1 coordinates.
std::vector<LabeledExample> make_erased_examples(const std::vector<Point>& z, int i_star);

struct IdentifyResult {
  uint32_t ell = 0;  // subset of [d], always contains i_star
  int8_t b = 1;
  int i_star = 0;
  std::optional<ReductionResult> reduction;  // absent in stub mode
};

// Distribution identifier: erases a uniformly chosen coordinate i*, treats it
// as the label, runs the pan-private uniform-distribution learner on the
// rest, and re-inserts i* into the returned subset. Requires |z| = cfg.n / 3
// full-support points of dimension cfg.d >= 2.
IdentifyResult identify_hard(const std::vector<Point>& z, const ReductionConfig& cfg,
                             RngStream& rng, const ReductionHooks& hooks = {});

// Distinguisher configuration. m and the acceptance threshold 3m/4 are fixed
// functions of (d, k, eps); n is the number of points handed to the
// identifier, so the inner party budget is 3n.
struct DistinguisherConfig {
  int64_t n = 0;
  int64_t m = 0;
  double eps = 1.0;
  double threshold = 0.0;
  ReductionConfig reduction;

  static DistinguisherConfig make(int d, int k, int64_t n, double eps);
  static int64_t test_sample_count(int d, int k, double eps);
  void validate() const;
};

struct DistPuResult {
  bool one = false;
  uint32_t ell = 0;
  int8_t b = 1;
  int i_star = 0;
  double lap_first = 0.0;
  double lap_second = 0.0;
  int64_t matches = 0;
  double c_star = 0.0;
};

// Distinguisher: identifies (ell, b) from the first n points, then counts how
// many of the next m points match the identified parity, doubly masked by
// Lap(1/eps) draws, and accepts iff the noisy count reaches 3m/4. Both noise
// draws are logged so the decision can be re-derived.
DistPuResult dist_pu(const std::vector<Point>& z, const DistinguisherConfig& cfg,
                     RngStream& rng, const ReductionHooks& hooks = {});

struct AdvantageEstimate {
  double p_hard = 0.0;
  double p_uniform = 0.0;
  double advantage = 0.0;
  WilsonInterval hard_ci;
  WilsonInterval uniform_ci;
  int64_t trials = 0;
  bool stub_inner = false;
};

// Monte Carlo estimate of Pr[accept | family member, (L,B) uniform] minus
// Pr[accept | uniform], with Wilson intervals on both arms. stub_inner runs
// the degenerate constant-output identifier and is reported distinctly.
AdvantageEstimate distinguishing_advantage(const HardFamily& family,
                                           const DistinguisherConfig& cfg,
                                           int64_t trials, RngStream& rng,
                                           bool stub_inner = false, int threads = 0);

// Reference calculator for the distinguishing lower-bound shape:
// tv / sqrt(eps^2 alpha^2 / C + delta * ln(C / delta)) with
// C = Sum_{j<=k} C(d, j). Constants inside the asymptotic are taken as 1.
// delta = 0 drops the second term.
double lower_bound_value(int d, int k, double eps, double delta, double alpha,
                         double tv);

}  // namespace shuffleparity
