#include "shuffleparity/panprivate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "shuffleparity/counting.hpp"
#include "shuffleparity/noise.hpp"
#include "shuffleparity/parallel.hpp"
#include "shuffleparity/subsets.hpp"

namespace shuffleparity {

ReductionConfig ReductionConfig::make(int d, int k, int64_t n, double eps) {
  ReductionConfig cfg;
  cfg.d = d;
  cfg.k = k;
  cfg.n = n;
  cfg.eps = eps;
  cfg.validate();
  return cfg;
}

void ReductionConfig::validate() const {
  if (n < 3 || n % 3 != 0) {
    throw std::invalid_argument("ReductionConfig: n must be a positive multiple of 3");
  }
  inner_learner().validate();
}

LearnerConfig ReductionConfig::inner_learner() const {
  LearnerConfig lc;
  lc.d = d;
  lc.k = k;
  lc.counting = CountingConfig::make(n, eps, c, splits);
  lc.counting.noise_enabled = noise_enabled;
  return lc;
}

ReductionConfig ReductionConfig::erased() const {
  ReductionConfig sub = *this;
  sub.d = d - 1;
  sub.k = std::min(k - 1, d - 1);
  if (sub.k < 0) sub.k = 0;
  return sub;
}

ReductionResult learn_par_unif(const std::vector<LabeledExample>& labeled,
                               const ReductionConfig& cfg, RngStream& rng,
                               const ReductionHooks& hooks, RecordMode record) {
  cfg.validate();
  const int64_t third = cfg.n / 3;
  if (static_cast<int64_t>(labeled.size()) != third) {
    throw std::invalid_argument("learn_par_unif: need exactly n/3 labeled examples");
  }
  for (const LabeledExample& ex : labeled) {
    if (ex.x.dimension() != cfg.d) {
      throw std::invalid_argument("learn_par_unif: example dimension mismatch");
    }
  }

  // Random order for the inner randomizer indices. The protocol's
  // randomizers are interchangeable here, so the permutation only fixes
  // which index slot each party occupies.
  std::vector<int64_t> pi(static_cast<size_t>(cfg.n));
  std::iota(pi.begin(), pi.end(), int64_t{0});
  std::shuffle(pi.begin(), pi.end(), rng.engine());

  const int8_t b_hat = hooks.forced_b_hat ? *hooks.forced_b_hat : rng.sign();
  const LabeledExample pad{Point::pad(cfg.d), b_hat};

  int64_t n_prime;
  if (hooks.forced_n_prime) {
    n_prime = *hooks.forced_n_prime;
    if (n_prime < 0 || n_prime > third) {
      throw std::invalid_argument("learn_par_unif: forced n' outside [0, n/3]");
    }
  } else {
    std::binomial_distribution<int64_t> bin(cfg.n, 2.0 / 9.0);
    n_prime = std::min(bin(rng.engine()), third);
  }

  std::vector<LabeledExample> stream;
  stream.reserve(static_cast<size_t>(cfg.n));
  for (int64_t i = 0; i < third; ++i) stream.push_back(pad);
  for (int64_t i = 0; i < third; ++i) {
    stream.push_back(i < n_prime ? labeled[static_cast<size_t>(i)] : pad);
  }
  for (int64_t i = 0; i < third; ++i) stream.push_back(pad);

  const ParityLearnerProtocol protocol(cfg.inner_learner());
  std::vector<RngStream> tag_streams =
      protocol.make_tag_streams(rng.derive(kTagStreamDomain));
  const LocalRandomizer<LabeledExample> randomizer =
      [&](const LabeledExample& ex, RngStream&) {
        return protocol.randomize(ex, tag_streams);
      };
  std::vector<LocalRandomizer<LabeledExample>> randomizers(
      static_cast<size_t>(cfg.n), randomizer);
  std::vector<LocalRandomizer<LabeledExample>> permuted(randomizers.size());
  for (size_t i = 0; i < permuted.size(); ++i) {
    permuted[i] = randomizers[static_cast<size_t>(pi[i])];
  }

  const Analyzer<LearnResult> analyzer = [&](const MessageBag& bag) {
    return protocol.analyze(bag);
  };
  auto [inner, transcript] = run_incremental(
      permuted, stream, InjectionSchedule{third, third, third}, analyzer, rng, record);

  ReductionResult result;
  result.hypothesis = inner.hypothesis;
  result.b_hat = b_hat;
  result.n_prime = n_prime;
  result.inner = std::move(inner);
  result.transcript = std::move(transcript);
  return result;
}

std::vector<LabeledExample> make_erased_examples(const std::vector<Point>& z, int i_star) {
  std::vector<LabeledExample> out;
  out.reserve(z.size());
  for (const Point& p : z) {
    if (!p.full_support()) {
      throw std::invalid_argument("make_erased_examples: points must be full-support");
    }
    LabeledExample ex;
    ex.y = static_cast<int8_t>(p.coord(i_star));
    ex.x = p.erase_coord(i_star);
    out.push_back(std::move(ex));
  }
  return out;
}

IdentifyResult identify_hard(const std::vector<Point>& z, const ReductionConfig& cfg,
                             RngStream& rng, const ReductionHooks& hooks) {
  cfg.validate();
  if (cfg.d < 2) throw std::invalid_argument("identify_hard: need dimension >= 2");
  if (static_cast<int64_t>(z.size()) * 3 != cfg.n) {
    throw std::invalid_argument("identify_hard: need exactly n/3 points");
  }
  for (const Point& p : z) {
    if (p.dimension() != cfg.d) {
      throw std::invalid_argument("identify_hard: point dimension mismatch");
    }
  }

  IdentifyResult result;
  result.i_star = hooks.forced_i_star
                      ? *hooks.forced_i_star
                      : static_cast<int>(rng.uniform_int(0, cfg.d - 1));
  if (result.i_star < 0 || result.i_star >= cfg.d) {
    throw std::invalid_argument("identify_hard: erased coordinate out of range");
  }

  const std::vector<LabeledExample> labeled = make_erased_examples(z, result.i_star);

  uint32_t r = 0;
  if (hooks.stub_learner) {
    result.b = 1;
  } else {
    ReductionResult reduction = learn_par_unif(labeled, cfg.erased(), rng, hooks);
    r = reduction.hypothesis.r;
    result.b = reduction.hypothesis.b;
    result.reduction = std::move(reduction);
  }
  result.ell = reinsert_mask_index(r, result.i_star) | (1u << result.i_star);
  return result;
}

int64_t DistinguisherConfig::test_sample_count(int d, int k, double eps) {
  if (d < 2 || k < 1 || k > d) {
    throw std::invalid_argument("DistinguisherConfig: bad dimensions");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("DistinguisherConfig: eps must be positive");
  const double dd = static_cast<double>(d);
  const double kk = static_cast<double>(k);
  const double raw = std::max(512.0 * dd / kk, 64.0 * std::sqrt(2.0 * dd / kk) / eps);
  return static_cast<int64_t>(std::ceil(raw));
}

DistinguisherConfig DistinguisherConfig::make(int d, int k, int64_t n, double eps) {
  DistinguisherConfig cfg;
  cfg.n = n;
  cfg.eps = eps;
  cfg.m = test_sample_count(d, k, eps);
  cfg.threshold = 3.0 * static_cast<double>(cfg.m) / 4.0;
  cfg.reduction = ReductionConfig::make(d, k, 3 * n, eps);
  cfg.validate();
  return cfg;
}

void DistinguisherConfig::validate() const {
  if (n < 1) throw std::invalid_argument("DistinguisherConfig: need n >= 1");
  if (m != test_sample_count(reduction.d, reduction.k, eps)) {
    throw std::invalid_argument("DistinguisherConfig: m inconsistent with (d, k, eps)");
  }
  if (threshold != 3.0 * static_cast<double>(m) / 4.0) {
    throw std::invalid_argument("DistinguisherConfig: threshold must be 3m/4");
  }
  reduction.validate();
  if (reduction.n != 3 * n) {
    throw std::invalid_argument("DistinguisherConfig: inner party budget must be 3n");
  }
}

DistPuResult dist_pu(const std::vector<Point>& z, const DistinguisherConfig& cfg,
                     RngStream& rng, const ReductionHooks& hooks) {
  cfg.validate();
  if (static_cast<int64_t>(z.size()) != cfg.n + cfg.m) {
    throw std::invalid_argument("dist_pu: need exactly n + m points");
  }
  const std::vector<Point> head(z.begin(), z.begin() + static_cast<size_t>(cfg.n));
  const IdentifyResult id = identify_hard(head, cfg.reduction, rng, hooks);
  if (id.ell == 0) throw std::logic_error("dist_pu: identifier returned empty subset");

  DistPuResult result;
  result.ell = id.ell;
  result.b = id.b;
  result.i_star = id.i_star;
  result.lap_first = sample_lap(1.0 / cfg.eps, rng);
  double c = result.lap_first;
  for (int64_t i = 0; i < cfg.m; ++i) {
    const Point& p = z[static_cast<size_t>(cfg.n + i)];
    const int sign = (std::popcount(id.ell & p.neg()) & 1) ? -1 : 1;
    if (sign == id.b) {
      c += 1.0;
      ++result.matches;
    }
  }
  result.lap_second = sample_lap(1.0 / cfg.eps, rng);
  result.c_star = c + result.lap_second;
  result.one = result.c_star >= cfg.threshold;
  return result;
}

AdvantageEstimate distinguishing_advantage(const HardFamily& family,
                                           const DistinguisherConfig& cfg,
                                           int64_t trials, RngStream& rng,
                                           bool stub_inner, int threads) {
  validate_family(family);
  cfg.validate();
  if (family.d != cfg.reduction.d) {
    throw std::invalid_argument("distinguishing_advantage: family dimension mismatch");
  }
  if (trials < 1) throw std::invalid_argument("distinguishing_advantage: trials < 1");

  ReductionHooks hooks;
  hooks.stub_learner = stub_inner;
  const int64_t total_points = cfg.n + cfg.m;

  const RngStream hard_base = rng.derive(0x68617264);
  const std::vector<uint8_t> hard_hits = run_trials<uint8_t>(
      trials, hard_base,
      [&](int64_t, RngStream& stream) -> uint8_t {
        const HardDistribution p = sample_family_member(family, stream);
        std::vector<Point> z;
        z.reserve(static_cast<size_t>(total_points));
        for (int64_t i = 0; i < total_points; ++i) z.push_back(sample_hard(p, stream));
        return dist_pu(z, cfg, stream, hooks).one ? 1 : 0;
      },
      threads);

  const RngStream uniform_base = rng.derive(0x756e6966);
  const std::vector<uint8_t> uniform_hits = run_trials<uint8_t>(
      trials, uniform_base,
      [&](int64_t, RngStream& stream) -> uint8_t {
        std::vector<Point> z;
        z.reserve(static_cast<size_t>(total_points));
        for (int64_t i = 0; i < total_points; ++i) {
          z.push_back(Point::uniform(family.d, stream));
        }
        return dist_pu(z, cfg, stream, hooks).one ? 1 : 0;
      },
      threads);

  const auto count_ones = [](const std::vector<uint8_t>& hits) {
    return static_cast<int64_t>(std::count(hits.begin(), hits.end(), uint8_t{1}));
  };
  const int64_t hard_ones = count_ones(hard_hits);
  const int64_t uniform_ones = count_ones(uniform_hits);

  AdvantageEstimate est;
  est.trials = trials;
  est.stub_inner = stub_inner;
  est.p_hard = static_cast<double>(hard_ones) / static_cast<double>(trials);
  est.p_uniform = static_cast<double>(uniform_ones) / static_cast<double>(trials);
  est.advantage = est.p_hard - est.p_uniform;
  est.hard_ci = wilson(hard_ones, trials);
  est.uniform_ci = wilson(uniform_ones, trials);
  return est;
}

double lower_bound_value(int d, int k, double eps, double delta, double alpha,
                         double tv) {
  if (d < 1 || k < 1 || k > d) throw std::invalid_argument("lower_bound_value: bad dimensions");
  if (!(eps > 0.0)) throw std::invalid_argument("lower_bound_value: eps must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("lower_bound_value: delta must be >= 0");
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    throw std::invalid_argument("lower_bound_value: alpha must be in (0, 1/2]");
  }
  if (!(tv > 0.0 && tv <= 1.0)) {
    throw std::invalid_argument("lower_bound_value: tv must be in (0, 1]");
  }
  const double cardinality = static_cast<double>(binomial_sum(d, k));
  double term = eps * eps * alpha * alpha / cardinality;
  if (delta > 0.0) term += delta * std::log(cardinality / delta);
  return tv / std::sqrt(term);
}

}  // namespace shuffleparity
