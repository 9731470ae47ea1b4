#include "shuffleparity/learner.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "shuffleparity/subsets.hpp"

namespace shuffleparity {

LearnerConfig LearnerConfig::make(int d, int k, int64_t n, double eps, int c, int splits) {
  LearnerConfig cfg;
  cfg.d = d;
  cfg.k = k;
  cfg.counting = CountingConfig::make(n, eps, c, splits);
  cfg.validate();
  return cfg;
}

int64_t LearnerConfig::hypothesis_count() const {
  return static_cast<int64_t>(2 * binomial_sum(d, k));
}

void LearnerConfig::validate() const {
  if (d < 1 || d > kMaxDimension) {
    throw std::invalid_argument("LearnerConfig: dimension must be in [1, 24]");
  }
  if (k < 0 || k > d) throw std::invalid_argument("LearnerConfig: need 0 <= k <= d");
  counting.validate();
}

std::vector<ParityConcept> enumerate_hypotheses(int d, int k) {
  if (d < 1 || d > kMaxDimension || k < 0 || k > d) {
    throw std::invalid_argument("enumerate_hypotheses: bad dimensions");
  }
  std::vector<ParityConcept> out;
  out.reserve(static_cast<size_t>(2 * binomial_sum(d, k)));
  const uint32_t limit = Point::all_ones(d);
  for (uint32_t mask = 0;; ++mask) {
    if (std::popcount(mask) <= k) {
      out.push_back(ParityConcept{d, mask, 1});
      out.push_back(ParityConcept{d, mask, -1});
    }
    if (mask == limit) break;
  }
  return out;
}

int consistency_bit(const ParityConcept& h, const LabeledExample& ex) {
  return eval_parity(h, ex.x) == ex.y ? 1 : 0;
}

size_t argmax_with_ties(std::span<const int64_t> values) {
  if (values.empty()) throw std::invalid_argument("argmax_with_ties: empty");
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

ParityLearnerProtocol::ParityLearnerProtocol(LearnerConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  hypotheses_ = enumerate_hypotheses(cfg_.d, cfg_.k);
}

std::vector<RngStream> ParityLearnerProtocol::make_tag_streams(const RngStream& parent) const {
  std::vector<RngStream> streams;
  streams.reserve(hypotheses_.size());
  for (size_t t = 0; t < hypotheses_.size(); ++t) {
    streams.push_back(parent.derive(static_cast<uint64_t>(t)));
  }
  return streams;
}

std::vector<Message> ParityLearnerProtocol::randomize(
    const LabeledExample& ex, std::vector<RngStream>& tag_streams) const {
  if (tag_streams.size() != hypotheses_.size()) {
    throw std::invalid_argument("randomize: tag stream count mismatch");
  }
  std::vector<Message> out;
  out.reserve(hypotheses_.size() * static_cast<size_t>(cfg_.counting.splits));
  for (size_t t = 0; t < hypotheses_.size(); ++t) {
    const int bit = consistency_bit(hypotheses_[t], ex);
    for (const Message& m :
         randomize_bit(bit, cfg_.counting, static_cast<uint32_t>(t), tag_streams[t])) {
      out.push_back(m);
    }
  }
  return out;
}

LearnResult ParityLearnerProtocol::analyze(const MessageBag& bag) const {
  LearnResult result;
  result.noisy_counts =
      analyze_counts(bag, cfg_.counting, static_cast<uint32_t>(hypotheses_.size()));
  result.hypothesis = hypotheses_[argmax_with_ties(result.noisy_counts)];
  return result;
}

LearnResult learn_shuffle(const std::vector<LabeledExample>& samples,
                          const LearnerConfig& cfg, const PartyStatus& status,
                          RngStream& rng) {
  cfg.validate();
  if (samples.empty()) throw std::invalid_argument("learn_shuffle: no samples");
  if (static_cast<int64_t>(samples.size()) != cfg.counting.n) {
    throw std::invalid_argument("learn_shuffle: sample count must equal the party count");
  }
  for (const LabeledExample& ex : samples) {
    if (ex.x.dimension() != cfg.d) {
      throw std::invalid_argument("learn_shuffle: sample dimension mismatch");
    }
  }
  const ParityLearnerProtocol protocol(cfg);
  std::vector<RngStream> tag_streams =
      protocol.make_tag_streams(rng.derive(kTagStreamDomain));
  const LocalRandomizer<LabeledExample> randomizer =
      [&](const LabeledExample& ex, RngStream&) {
        return protocol.randomize(ex, tag_streams);
      };
  const std::vector<LocalRandomizer<LabeledExample>> randomizers(samples.size(), randomizer);
  const Analyzer<LearnResult> analyzer = [&](const MessageBag& bag) {
    return protocol.analyze(bag);
  };
  auto [result, transcript] = run_round(randomizers, samples, status, analyzer, rng);
  return result;
}

double per_counter_epsilon(double eps_total, int64_t hypothesis_count) {
  if (!(eps_total > 0.0) || hypothesis_count < 1) {
    throw std::invalid_argument("per_counter_epsilon: bad arguments");
  }
  return eps_total / std::sqrt(static_cast<double>(hypothesis_count));
}

}  // namespace shuffleparity
