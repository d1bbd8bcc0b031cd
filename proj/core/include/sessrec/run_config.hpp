#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sessrec/event_log.hpp"
#include "sessrec/evaluate.hpp"
#include "sessrec/hyperopt.hpp"
#include "sessrec/preprocess.hpp"

namespace sessrec {

struct DatasetConfig {
  std::string name = "dataset";
  std::filesystem::path path;
  ColumnFormat format;
};

// One algorithm to tune/evaluate. Configuration sources, most specific
// first: explicit `params`, a tuned search result on disk, a named preset.
struct AlgorithmEntry {
  std::string name;  // e.g. "vsknn_ebr"
  std::optional<ParamConfig> params;
  std::optional<std::string> preset;  // dataset family, e.g. "retail"
  std::optional<int> trials;
  std::optional<int> post_hoc_trials;
};

struct TuningConfig {
  std::optional<int> slice;  // default: the slice with the most events
  int trials = 100;
  int post_hoc_trials = 100;
  int objective_cutoff = 20;  // reciprocal-rank cutoff the search maximizes
};

// Everything one benchmark run needs; a single JSON file drives all
// commands and command line flags override individual keys.
struct RunConfig {
  DatasetConfig dataset;
  PreprocessConfig preprocess;
  std::vector<AlgorithmEntry> algorithms;
  MetricConfig metrics;
  TuningConfig tuning;
  std::uint64_t seed = 42;
  int threads = 1;
  bool timing = false;
  std::filesystem::path out = "results";
};

// Strict parse: unknown keys and type mismatches are ConfigErrors.
RunConfig load_run_config(const std::filesystem::path& file);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<int> threads;
  std::optional<std::vector<int>> cutoffs;
  std::optional<bool> timing;
  std::optional<int> tune_slice;
  std::optional<int> trials;
};

void apply_overrides(RunConfig& config, const CliOverrides& overrides);

}  // namespace sessrec
