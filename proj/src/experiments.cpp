#include "shuffleparity/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "shuffleparity/counting.hpp"
#include "shuffleparity/hard_distribution.hpp"
#include "shuffleparity/learner.hpp"
#include "shuffleparity/noise.hpp"
#include "shuffleparity/panprivate.hpp"
#include "shuffleparity/parallel.hpp"
#include "shuffleparity/stats.hpp"
#include "shuffleparity/subsets.hpp"

namespace shuffleparity {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ReportRow make_row(const ExperimentConfig& cfg, std::string metric, double value) {
  ReportRow row;
  row.metric = std::move(metric);
  row.value = value;
  row.ci_low = kNaN;
  row.ci_high = kNaN;
  row.d = cfg.d;
  row.k = cfg.effective_k();
  row.n = cfg.n;
  row.m = cfg.m;
  return row;
}

ReportRow& with_ci(ReportRow& row, double low, double high) {
  row.ci_low = low;
  row.ci_high = high;
  row.has_ci = true;
  return row;
}

ReportRow& with_assert(ReportRow& row, bool passed) {
  row.asserted = true;
  row.passed = passed;
  return row;
}

uint64_t fnv1a(uint64_t hash, const std::string& text) {
  for (const char ch : text) {
    hash ^= static_cast<uint8_t>(ch);
    hash *= 1099511628211ULL;
  }
  return hash;
}

// Nearest-rank quantile.
double quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  double rank = std::ceil(q * static_cast<double>(values.size())) - 1.0;
  if (rank < 0.0) rank = 0.0;
  const double last = static_cast<double>(values.size() - 1);
  return values[static_cast<size_t>(rank < last ? rank : last)];
}

}  // namespace

bool Report::all_passed() const {
  for (const ReportRow& row : rows) {
    if (row.asserted && !row.passed) return false;
  }
  return true;
}

uint64_t config_hash(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "command=" << cfg.command << ";d=" << cfg.d << ";k=" << cfg.effective_k()
     << ";n=" << cfg.n << ";m=" << cfg.m << ";eps=" << fmt_double(cfg.eps)
     << ";c=" << cfg.c << ";splits=" << cfg.splits << ";alpha=" << fmt_double(cfg.alpha)
     << ";delta=" << fmt_double(cfg.delta) << ";tv-target=" << fmt_double(cfg.tv_target)
     << ";trials=" << cfg.trials << ";seed=" << cfg.seed
     << ";agnostic=" << cfg.agnostic << ";condition-bhat=" << cfg.condition_bhat
     << ";stub-inner=" << cfg.stub_inner << ";d-min=" << cfg.d_min
     << ";d-max=" << cfg.d_max << ";min-success=" << fmt_double(cfg.min_success)
     << ";assert-floor=" << cfg.assert_floor
     << ";tv-threshold=" << fmt_double(cfg.tv_threshold);
  return fnv1a(14695981039346656037ULL, os.str());
}

Report cmd_noise_audit(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.n <= 0) cfg.n = 10;
  if (cfg.trials <= 0) cfg.trials = 100000;
  Report report{cfg, {}};

  const RngStream base(cfg.seed);
  const IntegerPmf oracle = dlap_convolution_pmf(cfg.eps, cfg.c);
  const CountingConfig counting = CountingConfig::make(cfg.n, cfg.eps, cfg.c, cfg.splits);

  // Distribution of the summed noise shares, against the exact convolution.
  struct ShareTrial {
    int64_t sum;
  };
  const std::vector<ShareTrial> share_trials = run_trials<ShareTrial>(
      cfg.trials, base.derive(1),
      [&](int64_t, RngStream& stream) {
        int64_t sum = 0;
        for (const NoiseShare& s : make_shares(cfg.n, cfg.eps, cfg.c, stream)) {
          sum += s.value();
        }
        return ShareTrial{sum};
      },
      cfg.threads);
  IntCounter share_counter;
  RunningMoments share_moments;
  for (const ShareTrial& t : share_trials) {
    share_counter.add(t.sum);
    share_moments.add(static_cast<double>(t.sum));
  }
  const double shares_tv = share_counter.tv_against(oracle);
  const double expected_var = static_cast<double>(cfg.c) * dlap_variance(cfg.eps);

  ReportRow tv_row = make_row(cfg, "shares_tv", shares_tv);
  with_assert(tv_row, shares_tv <= cfg.tv_threshold);
  report.rows.push_back(tv_row);

  ReportRow var_row = make_row(cfg, "shares_variance", share_moments.variance());
  if (cfg.trials >= 100000) {
    with_assert(var_row, std::abs(share_moments.variance() - expected_var) <=
                             0.05 * expected_var);
  }
  report.rows.push_back(var_row);
  report.rows.push_back(make_row(cfg, "shares_variance_expected", expected_var));

  // Full protocol path: all bits one, analyzer output minus the true sum.
  struct ProtocolTrial {
    int64_t noise;
    uint32_t first_message;
    uint8_t wrapped;
  };
  const std::vector<ProtocolTrial> protocol_trials = run_trials<ProtocolTrial>(
      cfg.trials, base.derive(2),
      [&](int64_t, RngStream& stream) {
        MessageBag bag;
        int64_t clear_total = 0;
        uint32_t first_message = 0;
        for (int64_t i = 0; i < cfg.n; ++i) {
          RandomizedBit rb = randomize_bit_traced(1, counting, 0, stream);
          clear_total += rb.clear_value;
          if (i == 0) first_message = rb.messages.front().value;
          bag.add_all(rb.messages);
        }
        ProtocolTrial t;
        t.noise = analyze_count(bag, counting, 0) - cfg.n;
        t.first_message = first_message;
        t.wrapped = centered_mod(clear_total, counting.q) != clear_total ? 1 : 0;
        return t;
      },
      cfg.threads);
  IntCounter count_counter;
  IntCounter marginal_counter;
  int64_t wraparounds = 0;
  for (const ProtocolTrial& t : protocol_trials) {
    count_counter.add(t.noise);
    marginal_counter.add(static_cast<int64_t>(t.first_message));
    wraparounds += t.wrapped;
  }
  const double count_tv = count_counter.tv_against(oracle);
  ReportRow count_row = make_row(cfg, "count_tv", count_tv);
  with_assert(count_row, count_tv <= cfg.tv_threshold);
  report.rows.push_back(count_row);

  // Pointwise privacy ratio of the exact pmf under a unit shift.
  const double ratio = static_cast<double>(max_shift_ratio(oracle, 100));
  const double ratio_bound = std::exp(cfg.eps);
  ReportRow ratio_row = make_row(cfg, "max_shift_ratio", ratio);
  with_assert(ratio_row, ratio <= ratio_bound * (1.0 + 1e-9));
  report.rows.push_back(ratio_row);
  report.rows.push_back(make_row(cfg, "shift_ratio_bound", ratio_bound));

  // Statistical-closeness proxy for the split messages: total variation of a
  // single message's marginal against uniform on Z_q. Reported, not asserted.
  IntegerPmf uniform_q;
  uniform_q.min_value = 0;
  uniform_q.mass.assign(static_cast<size_t>(counting.q),
                        1.0L / static_cast<long double>(counting.q));
  report.rows.push_back(
      make_row(cfg, "delta_proxy_tv", marginal_counter.tv_against(uniform_q)));
  report.rows.push_back(
      make_row(cfg, "wraparound_count", static_cast<double>(wraparounds)));
  return report;
}

Report cmd_learn(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.d <= 0) cfg.d = 8;
  const int k = cfg.effective_k();
  if (cfg.n <= 0) {
    cfg.n = static_cast<int64_t>(
        std::ceil(8.0 * cfg.d * std::pow(2.0, static_cast<double>(cfg.d) / 2.0)));
  }
  if (cfg.trials <= 0) cfg.trials = 100;
  Report report{cfg, {}};

  const int64_t hypothesis_count = 2 * static_cast<int64_t>(binomial_sum(cfg.d, k));
  const double counter_eps = per_counter_epsilon(cfg.eps, hypothesis_count);
  const LearnerConfig learner =
      LearnerConfig::make(cfg.d, k, cfg.n, counter_eps, cfg.c, cfg.splits);
  const std::vector<ParityConcept> hypotheses = enumerate_hypotheses(cfg.d, k);

  struct Trial {
    uint8_t success;
    double generr;
  };
  const std::vector<Trial> trials = run_trials<Trial>(
      cfg.trials, RngStream(cfg.seed).derive(1),
      [&](int64_t, RngStream& stream) {
        const ParityConcept target =
            hypotheses[static_cast<size_t>(stream.uniform_int(
                0, static_cast<int64_t>(hypotheses.size()) - 1))];
        std::vector<LabeledExample> samples;
        samples.reserve(static_cast<size_t>(cfg.n));
        for (int64_t i = 0; i < cfg.n; ++i) {
          LabeledExample ex;
          ex.x = Point::uniform(cfg.d, stream);
          ex.y = cfg.agnostic ? stream.sign()
                              : static_cast<int8_t>(eval_parity(target, ex.x));
          samples.push_back(std::move(ex));
        }
        const LearnResult result = learn_shuffle(
            samples, learner, PartyStatus::all_honest(samples.size()), stream);
        Trial t;
        t.success = result.hypothesis == target ? 1 : 0;
        t.generr = generalization_error(target, result.hypothesis,
                                        CubeDistribution::uniform(cfg.d));
        return t;
      },
      cfg.threads);

  int64_t successes = 0;
  std::vector<double> generrs;
  generrs.reserve(trials.size());
  for (const Trial& t : trials) {
    successes += t.success;
    generrs.push_back(t.generr);
  }
  const WilsonInterval ci = wilson(successes, cfg.trials);
  const double success_rate =
      static_cast<double>(successes) / static_cast<double>(cfg.trials);

  ReportRow success_row = make_row(cfg, "success_rate", success_rate);
  with_ci(success_row, ci.low, ci.high);
  if (cfg.min_success >= 0.0) {
    with_assert(success_row, success_rate >= cfg.min_success);
  }
  report.rows.push_back(success_row);

  double generr_sum = 0.0;
  for (const double g : generrs) generr_sum += g;
  report.rows.push_back(
      make_row(cfg, "generr_mean", generr_sum / static_cast<double>(generrs.size())));
  report.rows.push_back(make_row(cfg, "generr_p50", quantile(generrs, 0.5)));
  report.rows.push_back(make_row(cfg, "generr_p90", quantile(generrs, 0.9)));
  report.rows.push_back(make_row(cfg, "per_counter_eps", counter_eps));
  report.rows.push_back(make_row(cfg, "composed_eps_linear",
                                 counter_eps * static_cast<double>(hypothesis_count)));
  report.rows.push_back(
      make_row(cfg, "hypothesis_count", static_cast<double>(hypothesis_count)));
  return report;
}

Report cmd_reduction(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.d <= 0) cfg.d = 6;
  const int k = cfg.effective_k();
  if (cfg.n <= 0) cfg.n = 900;
  if (cfg.trials <= 0) cfg.trials = 400;
  Report report{cfg, {}};

  const ReductionConfig reduction = ReductionConfig::make(cfg.d, k, cfg.n, cfg.eps);
  const std::vector<ParityConcept> hypotheses = enumerate_hypotheses(cfg.d, k);

  struct Trial {
    uint8_t success;
    uint8_t bhat_match;
    int64_t n_prime;
  };
  const std::vector<Trial> trials = run_trials<Trial>(
      cfg.trials, RngStream(cfg.seed).derive(1),
      [&](int64_t, RngStream& stream) {
        const ParityConcept target =
            hypotheses[static_cast<size_t>(stream.uniform_int(
                0, static_cast<int64_t>(hypotheses.size()) - 1))];
        std::vector<LabeledExample> labeled;
        labeled.reserve(static_cast<size_t>(cfg.n / 3));
        for (int64_t i = 0; i < cfg.n / 3; ++i) {
          LabeledExample ex;
          ex.x = Point::uniform(cfg.d, stream);
          ex.y = static_cast<int8_t>(eval_parity(target, ex.x));
          labeled.push_back(std::move(ex));
        }
        ReductionHooks hooks;
        if (cfg.condition_bhat) hooks.forced_b_hat = target.b;
        const ReductionResult result = learn_par_unif(labeled, reduction, stream, hooks);
        Trial t;
        t.success = result.hypothesis == target ? 1 : 0;
        t.bhat_match = result.b_hat == target.b ? 1 : 0;
        t.n_prime = result.n_prime;
        return t;
      },
      cfg.threads);

  int64_t successes = 0;
  int64_t bhat_matches = 0;
  double n_prime_sum = 0.0;
  for (const Trial& t : trials) {
    successes += t.success;
    bhat_matches += t.bhat_match;
    n_prime_sum += static_cast<double>(t.n_prime);
  }
  const WilsonInterval ci = wilson(successes, cfg.trials);
  const double recovery =
      static_cast<double>(successes) / static_cast<double>(cfg.trials);
  const double floor = cfg.condition_bhat ? 0.5 : 0.25;

  ReportRow recovery_row = make_row(cfg, "recovery_rate", recovery);
  with_ci(recovery_row, ci.low, ci.high);
  if (cfg.assert_floor) {
    with_assert(recovery_row, recovery >= floor - ci.halfwidth);
  }
  report.rows.push_back(recovery_row);
  report.rows.push_back(make_row(cfg, "recovery_floor", floor));
  report.rows.push_back(make_row(
      cfg, "b_hat_match_rate",
      static_cast<double>(bhat_matches) / static_cast<double>(cfg.trials)));
  report.rows.push_back(make_row(
      cfg, "n_prime_mean", n_prime_sum / static_cast<double>(cfg.trials)));
  return report;
}

Report cmd_distinguish(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.d <= 0) cfg.d = 8;
  const int k = cfg.effective_k();
  if (cfg.n <= 0) cfg.n = 90;
  if (cfg.trials <= 0) cfg.trials = 2000;
  const DistinguisherConfig dist = DistinguisherConfig::make(cfg.d, k, cfg.n, cfg.eps);
  cfg.m = dist.m;
  Report report{cfg, {}};

  const HardFamily family{cfg.d, k, 0.5};
  RngStream rng = RngStream(cfg.seed).derive(1);
  const AdvantageEstimate est = distinguishing_advantage(
      family, dist, cfg.trials, rng, cfg.stub_inner, cfg.threads);

  ReportRow hard_row = make_row(cfg, "p_hard", est.p_hard);
  with_ci(hard_row, est.hard_ci.low, est.hard_ci.high);
  report.rows.push_back(hard_row);
  ReportRow uniform_row = make_row(cfg, "p_uniform", est.p_uniform);
  with_ci(uniform_row, est.uniform_ci.low, est.uniform_ci.high);
  report.rows.push_back(uniform_row);

  const double ci_width = est.hard_ci.halfwidth + est.uniform_ci.halfwidth;
  ReportRow adv_row = make_row(cfg, "advantage", est.advantage);
  with_ci(adv_row, est.advantage - ci_width, est.advantage + ci_width);
  const double floor = static_cast<double>(k) / (64.0 * static_cast<double>(cfg.d));
  if (cfg.assert_floor && !cfg.stub_inner) {
    with_assert(adv_row, est.advantage >= floor - ci_width);
  }
  report.rows.push_back(adv_row);
  report.rows.push_back(make_row(cfg, "advantage_floor", floor));
  report.rows.push_back(
      make_row(cfg, "stub_inner", cfg.stub_inner ? 1.0 : 0.0));
  report.rows.push_back(make_row(cfg, "threshold", dist.threshold));
  return report;
}

Report cmd_bound(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.d_min < 1) cfg.d_min = 1;
  if (cfg.d_max < cfg.d_min) cfg.d_max = cfg.d_min;
  Report report{cfg, {}};

  bool halving_ok = true;
  bool monotone_ok = true;
  double shape_max_rel_err = 0.0;
  const bool closed_form =
      cfg.delta == 0.0 && cfg.alpha == 0.5 && cfg.k == 0;  // k = d path
  for (int d = cfg.d_min; d <= cfg.d_max; ++d) {
    const int k = cfg.k > 0 ? std::min(cfg.k, d) : d;
    const double value =
        lower_bound_value(d, k, cfg.eps, cfg.delta, cfg.alpha, cfg.tv_target);
    ReportRow row = make_row(cfg, "bound_value", value);
    row.d = d;
    row.k = k;
    report.rows.push_back(row);

    const double doubled =
        lower_bound_value(d, k, 2.0 * cfg.eps, cfg.delta, cfg.alpha, cfg.tv_target);
    if (cfg.delta == 0.0 && doubled != value / 2.0) halving_ok = false;
    const double half_tv =
        lower_bound_value(d, k, cfg.eps, cfg.delta, cfg.alpha, cfg.tv_target / 2.0);
    if (half_tv > value) monotone_ok = false;
    if (closed_form) {
      const double reference = cfg.tv_target *
                               std::pow(2.0, static_cast<double>(d) / 2.0) * 2.0 /
                               cfg.eps;
      const double rel = std::abs(value - reference) / reference;
      shape_max_rel_err = std::max(shape_max_rel_err, rel);
    }
  }
  if (cfg.delta == 0.0) {
    ReportRow halving = make_row(cfg, "halving_exact", halving_ok ? 1.0 : 0.0);
    with_assert(halving, halving_ok);
    report.rows.push_back(halving);
  }
  ReportRow monotone = make_row(cfg, "monotone_in_tv", monotone_ok ? 1.0 : 0.0);
  with_assert(monotone, monotone_ok);
  report.rows.push_back(monotone);
  if (closed_form) {
    ReportRow shape = make_row(cfg, "shape_max_rel_err", shape_max_rel_err);
    with_assert(shape, shape_max_rel_err <= 1e-9);
    report.rows.push_back(shape);
  }
  return report;
}

std::string to_csv(const Report& report) {
  std::ostringstream os;
  os << "command,d,k,n,m,eps,c,trials,metric,value,ci_low,ci_high,seed,config_hash\n";
  const uint64_t hash = config_hash(report.cfg);
  char hash_hex[17];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(hash));
  for (const ReportRow& row : report.rows) {
    os << report.cfg.command << ',' << row.d << ',' << row.k << ',' << row.n << ','
       << row.m << ',' << fmt_double(report.cfg.eps) << ',' << report.cfg.c << ','
       << report.cfg.trials << ',' << row.metric << ',' << fmt_double(row.value)
       << ',' << fmt_double(row.ci_low) << ',' << fmt_double(row.ci_high) << ','
       << report.cfg.seed << ',' << hash_hex << '\n';
  }
  return os.str();
}

std::string to_json(const Report& report) {
  nlohmann::json doc;
  const uint64_t hash = config_hash(report.cfg);
  char hash_hex[17];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(hash));
  doc["command"] = report.cfg.command;
  doc["seed"] = report.cfg.seed;
  doc["config_hash"] = hash_hex;
  doc["all_passed"] = report.all_passed();
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& row : report.rows) {
    nlohmann::json jrow;
    jrow["metric"] = row.metric;
    jrow["value"] = row.value;
    if (row.has_ci) {
      jrow["ci_low"] = row.ci_low;
      jrow["ci_high"] = row.ci_high;
    }
    jrow["d"] = row.d;
    jrow["k"] = row.k;
    jrow["n"] = row.n;
    jrow["m"] = row.m;
    if (row.asserted) jrow["passed"] = row.passed;
    rows.push_back(std::move(jrow));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace shuffleparity
