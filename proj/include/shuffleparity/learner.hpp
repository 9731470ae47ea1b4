#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shuffleparity/counting.hpp"
#include "shuffleparity/point.hpp"
#include "shuffleparity/shuffle.hpp"

namespace shuffleparity {

// The agnostic shuffle-model parity learner: one private counter per
// hypothesis, all inside a single shuffle round, argmax of the noisy
// consistency counts. counting.eps is the per-counter budget; the composed
// budget across the 2 * Sum_{j<=k} C(d,j) counters is reported by harnesses,
// not asserted here.
struct LearnerConfig {
  int d = 0;
  int k = 0;
  CountingConfig counting;

  static LearnerConfig make(int d, int k, int64_t n, double eps, int c = 3,
                            int splits = 1);
  int64_t hypothesis_count() const;
  void validate() const;
};

// All hypotheses (r, b) with |r| <= k, r possibly empty, in ascending bitmask
// order with b = +1 before b = -1. The position in this list is the
// hypothesis's counter tag and the tie-break order.
std::vector<ParityConcept> enumerate_hypotheses(int d, int k);

// 1 iff the hypothesis labels the example correctly; pad points use the
// zero-skipping evaluation, so they are consistent exactly with hypotheses
// whose sign matches the pad label.
int consistency_bit(const ParityConcept& h, const LabeledExample& ex);

// Smallest index attaining the maximum.
size_t argmax_with_ties(std::span<const int64_t> values);

struct LearnResult {
  ParityConcept hypothesis;
  std::vector<int64_t> noisy_counts;  // one per hypothesis tag
};

// The randomizer/analyzer pair of the learner, exposed so the pan-private
// reduction can drive the same protocol through an incremental execution.
// Noise is drawn from one fixed stream per counter tag, which makes the
// result independent of how counters would be scheduled across workers.
class ParityLearnerProtocol {
 public:
  explicit ParityLearnerProtocol(LearnerConfig cfg);

  const LearnerConfig& config() const { return cfg_; }
  const std::vector<ParityConcept>& hypotheses() const { return hypotheses_; }

  std::vector<RngStream> make_tag_streams(const RngStream& parent) const;

  // One party's messages: for every hypothesis tag, the counting-protocol
  // encoding of the consistency bit, drawn from that tag's stream.
  std::vector<Message> randomize(const LabeledExample& ex,
                                 std::vector<RngStream>& tag_streams) const;

  LearnResult analyze(const MessageBag& bag) const;

 private:
  LearnerConfig cfg_;
  std::vector<ParityConcept> hypotheses_;
};

// Derivation id for the tag-stream pool under the caller's stream. Shared by
// learn_shuffle and the pan-private reduction so that executions over the
// same effective inputs consume identical noise.
inline constexpr uint64_t kTagStreamDomain = 0x7467;

// Runs the full one-round protocol over the samples (one party per sample)
// and returns the argmax hypothesis plus the noisy count vector.
LearnResult learn_shuffle(const std::vector<LabeledExample>& samples,
                          const LearnerConfig& cfg, const PartyStatus& status,
                          RngStream& rng);

// Per-counter budget under the square-root split heuristic used by the
// experiment harnesses: eps_total / sqrt(#counters).
double per_counter_epsilon(double eps_total, int64_t hypothesis_count);

}  // namespace shuffleparity
