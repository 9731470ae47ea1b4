// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavy Monte Carlo checks run here rather than in the unit tests;
// worker count honors SHUFFLEPARITY_THREADS.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "shuffleparity/counting.hpp"
#include "shuffleparity/experiments.hpp"
#include "shuffleparity/hard_distribution.hpp"
#include "shuffleparity/learner.hpp"
#include "shuffleparity/noise.hpp"
#include "shuffleparity/panprivate.hpp"
#include "shuffleparity/parallel.hpp"
#include "shuffleparity/rng.hpp"
#include "shuffleparity/stats.hpp"
#include "shuffleparity/subsets.hpp"

namespace shuffleparity {
namespace {

// Calibrated constants for the Monte Carlo criteria. kLearnerConstant is the
// sample-size multiplier in n = C * d * 2^{d/2}; kDistinguisherBudget is the
// point count handed to the identifier in the distinguisher runs.
constexpr double kLearnerConstant = 8.0;
constexpr int64_t kDistinguisherBudget = 90;

struct Outcome {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.5g", v);
  return buf;
}

std::vector<LabeledExample> realizable_samples(const ParityConcept& target,
                                               int64_t n, RngStream& rng) {
  std::vector<LabeledExample> samples;
  samples.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    LabeledExample ex;
    ex.x = Point::uniform(target.d, rng);
    ex.y = static_cast<int8_t>(eval_parity(target, ex.x));
    samples.push_back(std::move(ex));
  }
  return samples;
}

// Criterion 1: sum-of-shares law through the full counting protocol for the
// (n, c, eps) grid, TV against the exact convolution at 1e6 trials, two
// minutes per cell.
Outcome criterion_noise_divisibility() {
  Outcome out{"1 noise divisibility", true, "", 0.0};
  struct Cell {
    int64_t n;
    int c;
    double eps;
  };
  const std::vector<Cell> cells{{1, 1, 1.0}, {10, 3, 1.0}, {50, 3, 0.5}};
  std::ostringstream detail;
  for (const Cell& cell : cells) {
    const auto start = std::chrono::steady_clock::now();
    const CountingConfig cfg = CountingConfig::make(cell.n, cell.eps, cell.c, 1);
    const IntegerPmf oracle = dlap_convolution_pmf(cell.eps, cell.c);
    const int64_t trials = 1000000;
    const std::vector<int64_t> share_sums = run_trials<int64_t>(
        trials, RngStream(1001).derive(static_cast<uint64_t>(cell.n)),
        [&](int64_t, RngStream& stream) {
          int64_t sum = 0;
          for (const NoiseShare& s : make_shares(cell.n, cell.eps, cell.c, stream)) {
            sum += s.value();
          }
          return sum;
        });
    IntCounter share_counter;
    for (const int64_t v : share_sums) share_counter.add(v);
    const double tv = share_counter.tv_against(oracle);
    // The same law through the full protocol: analyzer output minus true sum.
    const std::vector<int64_t> noise = run_trials<int64_t>(
        trials, RngStream(3001).derive(static_cast<uint64_t>(cell.n)),
        [&](int64_t, RngStream& stream) {
          MessageBag bag;
          for (int64_t i = 0; i < cfg.n; ++i) {
            bag.add_all(randomize_bit(1, cfg, 0, stream));
          }
          return analyze_count(bag, cfg, 0) - cfg.n;
        });
    IntCounter protocol_counter;
    for (const int64_t v : noise) protocol_counter.add(v);
    const double protocol_tv = protocol_counter.tv_against(oracle);
    const double secs = elapsed_seconds(start);
    const bool cell_ok = tv <= 0.01 && protocol_tv <= 0.01 && secs <= 120.0;
    out.pass = out.pass && cell_ok;
    detail << "(n=" << cell.n << ",c=" << cell.c << ",eps=" << cell.eps
           << "): shares_tv=" << fmt(tv) << " protocol_tv=" << fmt(protocol_tv)
           << " in " << fmt(secs) << "s; ";
  }
  out.detail = detail.str();
  return out;
}

// Criterion 2: robust noise variance at (10, 3, 1), within 5% of
// 3 * 2e^{-1} / (1 - e^{-1})^2.
Outcome criterion_robust_variance() {
  const int64_t trials = 1000000;
  const std::vector<int64_t> sums = run_trials<int64_t>(
      trials, RngStream(1002), [&](int64_t, RngStream& stream) {
        int64_t sum = 0;
        for (const NoiseShare& s : make_shares(10, 1.0, 3, stream)) sum += s.value();
        return sum;
      });
  RunningMoments moments;
  for (const int64_t s : sums) moments.add(static_cast<double>(s));
  const double expected = 3.0 * dlap_variance(1.0);
  const bool pass = std::abs(moments.variance() - expected) <= 0.05 * expected;
  return {"2 robust variance", pass,
          "var=" + fmt(moments.variance()) + " expected=" + fmt(expected), 0.0};
}

// Criterion 3: pointwise shift ratio of the exact c-fold convolution stays
// within e^eps over |i| <= 100.
Outcome criterion_pointwise_ratio() {
  bool pass = true;
  std::ostringstream detail;
  for (const auto& [c, eps] : std::vector<std::pair<int, double>>{
           {1, 1.0}, {3, 1.0}, {3, 0.5}}) {
    const IntegerPmf oracle = dlap_convolution_pmf(eps, c);
    const double ratio = static_cast<double>(max_shift_ratio(oracle, 100));
    const double bound = std::exp(eps);
    pass = pass && ratio <= bound * (1.0 + 1e-9);
    detail << "(c=" << c << ",eps=" << eps << "): " << fmt(ratio) << "<=" << fmt(bound)
           << "; ";
  }
  return {"3 pointwise privacy ratio", pass, detail.str(), 0.0};
}

double learner_success_rate(int d, int64_t n, int64_t trials, uint64_t seed) {
  const auto hypotheses = enumerate_hypotheses(d, d);
  const double counter_eps =
      per_counter_epsilon(1.0, static_cast<int64_t>(hypotheses.size()));
  const LearnerConfig cfg = LearnerConfig::make(d, d, n, counter_eps);
  const std::vector<uint8_t> hits = run_trials<uint8_t>(
      trials, RngStream(seed), [&](int64_t, RngStream& stream) -> uint8_t {
        const ParityConcept target = hypotheses[static_cast<size_t>(
            stream.uniform_int(0, static_cast<int64_t>(hypotheses.size()) - 1))];
        const auto samples = realizable_samples(target, n, stream);
        const LearnResult result =
            learn_shuffle(samples, cfg, PartyStatus::all_honest(samples.size()), stream);
        return result.hypothesis == target ? 1 : 0;
      });
  int64_t successes = 0;
  for (const uint8_t h : hits) successes += h;
  return static_cast<double>(successes) / static_cast<double>(trials);
}

// Criterion 4: sample-complexity shape. n = C * d * 2^{d/2} with the
// calibrated constant reaches 0.9 success; a quarter of the budget is
// strictly worse. Total budget: eps = 1 split square-root across counters.
Outcome criterion_learner_shape() {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream detail;
  for (const int d : {6, 8}) {
    const int64_t n = static_cast<int64_t>(
        std::ceil(kLearnerConstant * d * std::pow(2.0, static_cast<double>(d) / 2.0)));
    const double full = learner_success_rate(d, n, 100, 1004 + static_cast<uint64_t>(d));
    const double quarter =
        learner_success_rate(d, n / 4, 100, 2004 + static_cast<uint64_t>(d));
    const bool d_ok = full >= 0.9 && quarter < full;
    pass = pass && d_ok;
    detail << "d=" << d << ": success(n=" << n << ")=" << fmt(full) << " success(n/4)="
           << fmt(quarter) << "; ";
  }
  const double secs = elapsed_seconds(start);
  pass = pass && secs <= 600.0;
  detail << "in " << fmt(secs) << "s";
  return {"4 learner sample complexity shape", pass, detail.str(), 0.0};
}

// Criterion 5: reduction recovery floors at d = 6 with an ample inner budget:
// 1/4 unconditioned, 1/2 conditioned on the pad-label guess.
Outcome criterion_reduction_floor() {
  const int d = 6;
  const ReductionConfig cfg = ReductionConfig::make(d, d, 900, 1.0);
  const auto hypotheses = enumerate_hypotheses(d, d);
  const int64_t trials = 400;
  struct Arm {
    double rate;
    WilsonInterval ci;
  };
  const auto recovery = [&](bool condition, uint64_t seed) {
    const std::vector<uint8_t> hits = run_trials<uint8_t>(
        trials, RngStream(seed), [&](int64_t, RngStream& stream) -> uint8_t {
          const ParityConcept target = hypotheses[static_cast<size_t>(
              stream.uniform_int(0, static_cast<int64_t>(hypotheses.size()) - 1))];
          const auto labeled = realizable_samples(target, cfg.n / 3, stream);
          ReductionHooks hooks;
          if (condition) hooks.forced_b_hat = target.b;
          return learn_par_unif(labeled, cfg, stream, hooks).hypothesis == target ? 1
                                                                                   : 0;
        });
    int64_t successes = 0;
    for (const uint8_t h : hits) successes += h;
    return Arm{static_cast<double>(successes) / static_cast<double>(trials),
               wilson(successes, trials)};
  };
  const Arm plain = recovery(false, 1005);
  const Arm conditioned = recovery(true, 1006);
  const bool ok_plain = plain.rate >= 0.25 - plain.ci.halfwidth;
  const bool ok_cond = conditioned.rate >= 0.5 - conditioned.ci.halfwidth;
  return {"5 pad-and-permute recovery floor", ok_plain && ok_cond,
          "recovery=" + fmt(plain.rate) + " (floor 0.25), conditioned=" +
              fmt(conditioned.rate) + " (floor 0.5)",
          0.0};
}

// Criterion 6: the erased-coordinate label construction is exact whenever the
// erased index lies in ell, over 1e4 random instances.
Outcome criterion_identify_labels() {
  RngStream rng(1007);
  int64_t failures = 0;
  for (int64_t trial = 0; trial < 10000; ++trial) {
    const int d = static_cast<int>(rng.uniform_int(2, 10));
    uint32_t ell = static_cast<uint32_t>(rng.next_u64()) & Point::all_ones(d);
    if (ell == 0) ell = 1;
    const HardDistribution p{d, ell, rng.sign(), 0.5};
    std::vector<int> members;
    for (int i = 0; i < d; ++i) {
      if (ell & (1u << i)) members.push_back(i);
    }
    const int i_star = members[static_cast<size_t>(
        rng.uniform_int(0, static_cast<int64_t>(members.size()) - 1))];
    const Point z = sample_hard(p, rng);
    const auto examples = make_erased_examples({z}, i_star);
    const uint32_t residual = erase_mask_index(ell & ~(1u << i_star), i_star);
    int prod = 1;
    for (int i = 0; i < d - 1; ++i) {
      if (residual & (1u << i)) prod *= examples[0].x.coord(i);
    }
    if (examples[0].y != p.b * prod || examples[0].y != z.coord(i_star)) ++failures;
  }
  return {"6 identifier label consistency", failures == 0,
          "failures=" + std::to_string(failures) + " of 10000", 0.0};
}

DistinguisherConfig distinguisher_config() {
  return DistinguisherConfig::make(8, 8, kDistinguisherBudget, 1.0);
}

// Criterion 7: uniform inputs accept with probability at most k/64d + 0.01.
Outcome criterion_distpu_uniform() {
  const DistinguisherConfig cfg = distinguisher_config();
  const int64_t trials = 10000;
  const std::vector<uint8_t> hits = run_trials<uint8_t>(
      trials, RngStream(1008), [&](int64_t, RngStream& stream) -> uint8_t {
        std::vector<Point> z;
        z.reserve(static_cast<size_t>(cfg.n + cfg.m));
        for (int64_t i = 0; i < cfg.n + cfg.m; ++i) {
          z.push_back(Point::uniform(8, stream));
        }
        return dist_pu(z, cfg, stream).one ? 1 : 0;
      });
  int64_t ones = 0;
  for (const uint8_t h : hits) ones += h;
  const double rate = static_cast<double>(ones) / static_cast<double>(trials);
  return {"7 distinguisher uniform case", rate <= 1.0 / 64.0 + 0.01,
          "p1=" + fmt(rate) + " bound=" + fmt(1.0 / 64.0 + 0.01), 0.0};
}

// Criterion 8: full-weight hard inputs accept with probability at least
// |ell| / 8d = 1/8.
Outcome criterion_distpu_hard() {
  const DistinguisherConfig cfg = distinguisher_config();
  const int64_t trials = 10000;
  const std::vector<uint8_t> hits = run_trials<uint8_t>(
      trials, RngStream(1009), [&](int64_t, RngStream& stream) -> uint8_t {
        const HardDistribution p{8, Point::all_ones(8), stream.sign(), 0.5};
        std::vector<Point> z;
        z.reserve(static_cast<size_t>(cfg.n + cfg.m));
        for (int64_t i = 0; i < cfg.n + cfg.m; ++i) z.push_back(sample_hard(p, stream));
        return dist_pu(z, cfg, stream).one ? 1 : 0;
      });
  int64_t ones = 0;
  for (const uint8_t h : hits) ones += h;
  const double rate = static_cast<double>(ones) / static_cast<double>(trials);
  return {"8 distinguisher hard case", rate >= 1.0 / 8.0,
          "p1=" + fmt(rate) + " floor=" + fmt(1.0 / 8.0), 0.0};
}

// Criterion 9: distinguishing advantage at k = d = 8 at least 1/64 - CI.
Outcome criterion_advantage() {
  const DistinguisherConfig cfg = distinguisher_config();
  RngStream rng(1010);
  const AdvantageEstimate est =
      distinguishing_advantage(HardFamily{8, 8, 0.5}, cfg, 2000, rng);
  const double ci = est.hard_ci.halfwidth + est.uniform_ci.halfwidth;
  const bool pass = est.advantage >= 1.0 / 64.0 - ci;
  return {"9 distinguishing advantage", pass,
          "advantage=" + fmt(est.advantage) + " ci=" + fmt(ci) + " floor=" +
              fmt(1.0 / 64.0),
          0.0};
}

// Criterion 10: the bound calculator reproduces the closed form exactly at
// delta = 0, alpha = 1/2, k = d, and doubling eps halves the value.
Outcome criterion_bound_calculator() {
  bool pass = true;
  std::ostringstream detail;
  for (int d = 4; d <= 16; ++d) {
    for (const double eps : {0.5, 1.0, 2.0}) {
      const double value = lower_bound_value(d, d, eps, 0.0, 0.5, 1.0 / 64.0);
      const double reference =
          (1.0 / 64.0) * std::pow(2.0, static_cast<double>(d) / 2.0) * 2.0 / eps;
      if (std::abs(value - reference) > 1e-9 * reference) pass = false;
      const double doubled = lower_bound_value(d, d, 2.0 * eps, 0.0, 0.5, 1.0 / 64.0);
      if (doubled != value / 2.0) pass = false;
    }
  }
  detail << "closed form and exact halving over d in [4,16], eps in {0.5,1,2}";
  return {"10 bound calculator", pass, detail.str(), 0.0};
}

// Criterion 11: framework invariants, 1e4 random cases each.
Outcome criterion_framework_invariants() {
  RngStream rng(1011);
  int64_t failures = 0;

  // Permutation invariance: the bag and any analyzer of it ignore order.
  for (int64_t trial = 0; trial < 10000; ++trial) {
    const int count = static_cast<int>(rng.uniform_int(1, 25));
    std::vector<Message> messages;
    for (int i = 0; i < count; ++i) {
      messages.push_back(Message{static_cast<uint32_t>(rng.uniform_int(0, 3)),
                                 static_cast<uint32_t>(rng.uniform_int(0, 12))});
    }
    std::vector<Message> shuffled = messages;
    std::shuffle(shuffled.begin(), shuffled.end(), rng.engine());
    MessageBag a;
    a.add_all(messages);
    MessageBag b;
    b.add_all(shuffled);
    if (!(a == b) || a.canonical() != b.canonical()) ++failures;
  }

  // Message conservation under dropouts.
  for (int64_t trial = 0; trial < 10000; ++trial) {
    const size_t n = static_cast<size_t>(rng.uniform_int(1, 30));
    std::vector<int> counts(n);
    std::vector<LocalRandomizer<int>> randomizers;
    for (size_t i = 0; i < n; ++i) {
      counts[i] = static_cast<int>(rng.uniform_int(0, 3));
      randomizers.push_back([](const int& c, RngStream&) {
        return std::vector<Message>(static_cast<size_t>(c), Message{0, 1});
      });
    }
    const PartyStatus status = PartyStatus::with_dropouts(
        n, static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(n))), rng);
    uint64_t expected = 0;
    for (size_t i = 0; i < n; ++i) {
      if (status.honest[i]) expected += static_cast<uint64_t>(counts[i]);
    }
    const Analyzer<uint64_t> size_analyzer = [](const MessageBag& bag) {
      return bag.size();
    };
    auto [size, transcript] = run_round(randomizers, counts, status, size_analyzer, rng);
    if (size != expected || transcript.final_bag().size() != expected) ++failures;
  }

  // Exact sum recovery with the noise hook disabled.
  for (int64_t trial = 0; trial < 10000; ++trial) {
    const int64_t n = rng.uniform_int(1, 64);
    CountingConfig cfg = CountingConfig::make(n, 1.0, 3, 1);
    cfg.noise_enabled = false;
    MessageBag bag;
    int64_t sum = 0;
    for (int64_t i = 0; i < n; ++i) {
      const int a = static_cast<int>(rng.uniform_int(0, 1));
      sum += a;
      bag.add_all(randomize_bit(a, cfg, 0, rng));
    }
    if (analyze_count(bag, cfg, 0) != sum) ++failures;
  }

  // Complement identity on full-support samples.
  for (int64_t trial = 0; trial < 10000; ++trial) {
    const int d = static_cast<int>(rng.uniform_int(1, 10));
    const int64_t n = rng.uniform_int(1, 30);
    std::vector<LabeledExample> samples;
    for (int64_t i = 0; i < n; ++i) {
      samples.push_back(LabeledExample{Point::uniform(d, rng), rng.sign()});
    }
    const uint32_t ell = static_cast<uint32_t>(rng.next_u64()) & Point::all_ones(d);
    int64_t plus = 0, minus = 0;
    for (const LabeledExample& ex : samples) {
      plus += consistency_bit(ParityConcept{d, ell, 1}, ex);
      minus += consistency_bit(ParityConcept{d, ell, -1}, ex);
    }
    if (plus + minus != n) ++failures;
  }

  return {"11 framework invariants", failures == 0,
          "failures=" + std::to_string(failures) + " across 4x10000 cases", 0.0};
}

// Criterion 12: the CLI emits byte-identical files for identical
// (config, seed).
Outcome criterion_cli_determinism() {
#ifndef SPSIM_BINARY
  return {"12 CLI determinism", false, "CLI binary path not configured", 0.0};
#else
  const std::string binary = SPSIM_BINARY;
  const auto read_file = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const auto run_twice = [&](const std::string& args, const std::string& stem) {
    const std::string a = "/tmp/spsim_" + stem + "_a.csv";
    const std::string b = "/tmp/spsim_" + stem + "_b.csv";
    const std::string cmd_a = binary + " " + args + " --out " + a;
    const std::string cmd_b = binary + " " + args + " --out " + b;
    if (std::system(cmd_a.c_str()) != 0) return std::string("command failed: " + cmd_a);
    if (std::system(cmd_b.c_str()) != 0) return std::string("command failed: " + cmd_b);
    const std::string content_a = read_file(a);
    if (content_a.empty()) return std::string("empty output: " + a);
    if (content_a != read_file(b)) return std::string("outputs differ for: " + args);
    return std::string();
  };
  std::string err = run_twice(
      "noise-audit --n 5 --c 3 --eps 1 --trials 20000 --seed 7", "noise");
  if (err.empty()) {
    err = run_twice("learn --d 4 --k 4 --n 64 --trials 20 --seed 9", "learn");
  }
  if (err.empty()) {
    // A config file carrying the same options produces the same bytes.
    const std::string config_path = "/tmp/spsim_config.ini";
    std::ofstream config(config_path);
    config << "[learn]\nd=4\nk=4\nn=64\ntrials=20\nseed=9\n";
    config.close();
    const std::string flag_out = "/tmp/spsim_learn_a.csv";  // from run_twice above
    const std::string cfg_out = "/tmp/spsim_learn_cfg.csv";
    const std::string cmd =
        binary + " --config " + config_path + " learn --out " + cfg_out;
    if (std::system(cmd.c_str()) != 0) {
      err = "command failed: " + cmd;
    } else if (read_file(cfg_out) != read_file(flag_out)) {
      err = "config-file run differs from flag run";
    }
  }
  if (err.empty()) {
    // Exit codes: 2 on usage errors, 1 on a failed assertion.
    if (std::system((binary + " bogus-command > /dev/null 2>&1").c_str()) == 0) {
      err = "usage error did not fail";
    } else if (std::system((binary +
                            " learn --d 4 --n 32 --trials 5 --seed 3"
                            " --min-success 1.5 > /dev/null 2>&1")
                               .c_str()) == 0) {
      err = "assertion failure did not set the exit code";
    }
  }
  return {"12 CLI determinism", err.empty(),
          err.empty() ? "flag runs, config-file run byte-identical; exit codes set"
                      : err,
          0.0};
#endif
}

}  // namespace
}  // namespace shuffleparity

int main() {
  using namespace shuffleparity;
  using Criterion = Outcome (*)();
  const std::vector<Criterion> criteria{
      criterion_noise_divisibility, criterion_robust_variance,
      criterion_pointwise_ratio,    criterion_learner_shape,
      criterion_reduction_floor,    criterion_identify_labels,
      criterion_distpu_uniform,     criterion_distpu_hard,
      criterion_advantage,          criterion_bound_calculator,
      criterion_framework_invariants, criterion_cli_determinism};

  bool all_pass = true;
  for (const Criterion criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = criterion();
    outcome.seconds = elapsed_seconds(start);
    all_pass = all_pass && outcome.pass;
    std::printf("[%s] criterion %s: %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL",
                outcome.name.c_str(), outcome.detail.c_str(), outcome.seconds);
    std::fflush(stdout);
  }
  std::printf("%s\n", all_pass ? "ACCEPTANCE: all criteria passed"
                               : "ACCEPTANCE: FAILURES PRESENT");
  return all_pass ? 0 : 1;
}
