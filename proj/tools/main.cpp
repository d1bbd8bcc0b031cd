// Command-line front end: preprocess -> tune -> eval -> report, all driven by
// one JSON run config with flag overrides. Exit codes: 0 success, 1 bad
// config or data, 2 internal error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sessrec/commands.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  std::vector<int> cutoffs;
  bool timing = false;
  int tune_slice = -1;
  int trials = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "override the configured seed");
  cmd->add_option("--out", args.out, "override the output directory");
  cmd->add_option("--threads", args.threads, "override the worker thread count");
  cmd->add_option("--cutoffs", args.cutoffs, "override the metric cutoffs")->delimiter(',');
  cmd->add_flag("--timing", args.timing, "single-worker mode with fit/prediction timings");
  cmd->add_option("--tune-slice", args.tune_slice, "slice used for hyperparameter search");
  cmd->add_option("--trials", args.trials, "override the joint-phase trial count");
}

sessrec::RunConfig load_with_overrides(const CLI::App* cmd, const CommonArgs& args) {
  sessrec::RunConfig config = sessrec::load_run_config(args.config_path);
  sessrec::CliOverrides overrides;
  if (cmd->count("--seed") > 0) overrides.seed = args.seed;
  if (cmd->count("--out") > 0) overrides.out = args.out;
  if (cmd->count("--threads") > 0) overrides.threads = args.threads;
  if (cmd->count("--cutoffs") > 0) overrides.cutoffs = args.cutoffs;
  if (cmd->count("--timing") > 0) overrides.timing = true;
  if (cmd->count("--tune-slice") > 0) overrides.tune_slice = args.tune_slice;
  if (cmd->count("--trials") > 0) overrides.trials = args.trials;
  sessrec::apply_overrides(config, overrides);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"session-aware next-item recommendation benchmark"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "1.0.0");

  CommonArgs args;
  bool resume = false;
  int sort_cutoff = 0;

  CLI::App* preprocess =
      app.add_subcommand("preprocess", "load, clean, slice and split the event log");
  add_common(preprocess, args);

  CLI::App* tune = app.add_subcommand("tune", "random-search hyperparameters per algorithm");
  add_common(tune, args);
  tune->add_flag("--resume", resume, "skip algorithms whose search results already exist");

  CLI::App* eval = app.add_subcommand("eval", "fit and score every algorithm on every slice");
  add_common(eval, args);

  CLI::App* report = app.add_subcommand("report", "aggregate per-slice reports into a ranking");
  add_common(report, args);
  report->add_option("--sort-cutoff", sort_cutoff,
                     "rank rows by MAP at this cutoff (0 = largest configured)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (preprocess->parsed()) {
      sessrec::cmd_preprocess(load_with_overrides(preprocess, args), std::cout);
    } else if (tune->parsed()) {
      sessrec::cmd_tune(load_with_overrides(tune, args), resume, std::cout);
    } else if (eval->parsed()) {
      sessrec::cmd_eval(load_with_overrides(eval, args), std::cout);
    } else if (report->parsed()) {
      sessrec::cmd_report(load_with_overrides(report, args), sort_cutoff, std::cout);
    }
  } catch (const sessrec::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const sessrec::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
