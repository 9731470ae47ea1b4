#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace shuffleparity {

// One harness invocation. Flags mirror these field names in kebab-case; the
// seed fully determines every random draw of the run.
struct ExperimentConfig {
  std::string command;
  int d = 0;  // 0 means the command default
  int k = 0;  // 0 means k = d
  int64_t n = 0;
  int64_t m = 0;  // derived for distinguish
  double eps = 1.0;
  int c = 3;
  int splits = 1;
  double alpha = 0.5;
  double delta = 0.0;
  double tv_target = 1.0 / 64.0;
  int64_t trials = 0;
  uint64_t seed = 1;
  int threads = 0;

  bool agnostic = false;        // learn: uniformly random labels
  bool condition_bhat = false;  // reduction: condition on the pad-label guess
  bool stub_inner = false;      // distinguish: constant-output inner learner
  int d_min = 4;                // bound sweep
  int d_max = 16;
  double min_success = -1.0;    // learn assertion; negative disables
  bool assert_floor = true;     // reduction/distinguish floor assertions
  double tv_threshold = 0.01;   // noise-audit assertion

  int effective_k() const { return k > 0 ? k : d; }
};

struct ReportRow {
  std::string metric;
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool has_ci = false;
  int d = 0;
  int k = 0;
  int64_t n = 0;
  int64_t m = 0;
  bool asserted = false;
  bool passed = true;
};

struct Report {
  ExperimentConfig cfg;
  std::vector<ReportRow> rows;

  bool all_passed() const;
};

uint64_t config_hash(const ExperimentConfig& cfg);

Report cmd_noise_audit(const ExperimentConfig& cfg);
Report cmd_learn(const ExperimentConfig& cfg);
Report cmd_reduction(const ExperimentConfig& cfg);
Report cmd_distinguish(const ExperimentConfig& cfg);
Report cmd_bound(const ExperimentConfig& cfg);

// CSV schema: command,d,k,n,m,eps,c,trials,metric,value,ci_low,ci_high,seed,
// config_hash. Byte-identical for identical (config, seed).
std::string to_csv(const Report& report);
std::string to_json(const Report& report);

}  // namespace shuffleparity
