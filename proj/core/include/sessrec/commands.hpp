#pragma once

#include <iosfwd>

#include "sessrec/run_config.hpp"

namespace sessrec {

// The work behind each CLI subcommand, callable in-process. All write their
// outputs under <out>/<dataset>/ and report progress on `log`. They throw
// ConfigError/DataError for caller mistakes; the CLI maps those to exit 1
// and anything else to exit 2.

// Load, clean, slice and split the raw event file; persist splits, id maps
// and the manifest.
void cmd_preprocess(const RunConfig& config, std::ostream& log);

// Random-search each algorithm on the tuning slice's validation sessions;
// persist search.json per algorithm. With `resume`, algorithms whose
// search.json already holds the requested number of trials are skipped.
void cmd_tune(const RunConfig& config, bool resume, std::ostream& log);

// Fit each algorithm on every slice's train sessions with its resolved
// parameters and score the test sessions; persist report.json/report.csv.
void cmd_eval(const RunConfig& config, std::ostream& log);

// Aggregate per-slice reports into a ranking table (slice means, sorted by
// mean average precision at `sort_cutoff`, best first); persist summary.csv
// and summary.txt. A cutoff of 0 picks the largest one configured.
void cmd_report(const RunConfig& config, int sort_cutoff, std::ostream& log);

}  // namespace sessrec
