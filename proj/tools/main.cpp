#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shuffleparity/experiments.hpp"

namespace {

using shuffleparity::ExperimentConfig;
using shuffleparity::Report;

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg, std::string& out,
                        std::string& format) {
  cmd->add_option("--d", cfg.d, "ambient dimension");
  cmd->add_option("--k", cfg.k, "max parity weight (0 = d)");
  cmd->add_option("--n", cfg.n, "sample / party count (0 = command default)");
  cmd->add_option("--eps", cfg.eps, "privacy parameter");
  cmd->add_option("--c", cfg.c, "noise divisibility multiplier");
  cmd->add_option("--splits", cfg.splits, "messages per party");
  cmd->add_option("--alpha", cfg.alpha, "distribution tilt");
  cmd->add_option("--delta", cfg.delta, "delta for the bound calculator");
  cmd->add_option("--tv-target", cfg.tv_target, "target total variation distance");
  cmd->add_option("--trials", cfg.trials, "Monte Carlo trials (0 = command default)");
  cmd->add_option("--seed", cfg.seed, "master seed; determines all randomness");
  cmd->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
  cmd->add_option("--out", out, "output path (default stdout)");
  cmd->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

int emit(const Report& report, const std::string& out, const std::string& format) {
  const std::string text =
      format == "json" ? shuffleparity::to_json(report) : shuffleparity::to_csv(report);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open output file: " << out << "\n";
      return 2;
    }
    file << text;
  }
  if (!report.all_passed()) {
    std::cerr << "assertion failure: at least one checked metric missed its bound\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shuffle-model private parity learning simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "load options from an INI file");

  ExperimentConfig cfg;
  std::string out;
  std::string format = "csv";
  std::function<Report()> runner;

  auto* noise = app.add_subcommand(
      "noise-audit", "distributional checks for the divisible counting noise");
  add_common_options(noise, cfg, out, format);
  noise->add_option("--tv-threshold", cfg.tv_threshold,
                    "asserted bound on the empirical-vs-exact TV distance");
  noise->callback([&] {
    cfg.command = "noise-audit";
    runner = [&] { return shuffleparity::cmd_noise_audit(cfg); };
  });

  auto* learn = app.add_subcommand(
      "learn", "shuffle-model parity learner success rate and error quantiles");
  add_common_options(learn, cfg, out, format);
  learn->add_flag("--agnostic", cfg.agnostic, "uniformly random labels");
  learn->add_option("--min-success", cfg.min_success,
                    "assert success rate at least this value (negative = report only)");
  learn->callback([&] {
    cfg.command = "learn";
    runner = [&] { return shuffleparity::cmd_learn(cfg); };
  });

  auto* reduction = app.add_subcommand(
      "reduction", "pad-and-permute reduction recovery rate");
  add_common_options(reduction, cfg, out, format);
  reduction->add_flag("--condition-bhat", cfg.condition_bhat,
                      "condition on a correct pad-label guess");
  reduction->add_flag("!--no-assert", cfg.assert_floor, "disable the floor assertion");
  reduction->callback([&] {
    cfg.command = "reduction";
    runner = [&] { return shuffleparity::cmd_reduction(cfg); };
  });

  auto* distinguish = app.add_subcommand(
      "distinguish", "hard-vs-uniform distinguishing advantage");
  add_common_options(distinguish, cfg, out, format);
  distinguish->add_flag("--stub-inner", cfg.stub_inner,
                        "replace the inner learner with a constant-output stub");
  distinguish->add_flag("!--no-assert", cfg.assert_floor, "disable the floor assertion");
  distinguish->callback([&] {
    cfg.command = "distinguish";
    runner = [&] { return shuffleparity::cmd_distinguish(cfg); };
  });

  auto* bound = app.add_subcommand(
      "bound", "reference lower-bound calculator sweep");
  add_common_options(bound, cfg, out, format);
  bound->add_option("--d-min", cfg.d_min, "sweep start");
  bound->add_option("--d-max", cfg.d_max, "sweep end");
  bound->callback([&] {
    cfg.command = "bound";
    runner = [&] { return shuffleparity::cmd_bound(cfg); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return emit(runner(), out, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
