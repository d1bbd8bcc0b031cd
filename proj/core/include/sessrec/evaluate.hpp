#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sessrec/extensions.hpp"
#include "sessrec/metrics.hpp"
#include "sessrec/preprocess.hpp"

namespace sessrec {

struct MetricConfig {
  std::vector<int> cutoffs = {5, 10, 20};
};

struct CutoffMetrics {
  double hit_rate = 0.0;
  double mrr = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double map = 0.0;
  double coverage = 0.0;
  double popularity = 0.0;

  friend bool operator==(const CutoffMetrics&, const CutoffMetrics&) = default;
};

struct MetricReport {
  std::map<int, CutoffMetrics> at;   // keyed by cutoff
  double training_time_s = 0.0;
  double mean_prediction_time_ms = 0.0;
  std::int64_t prediction_events = 0;
  std::int64_t eval_sessions = 0;
};

enum class EvalRole { validation, test };

// Iterative reveal over every evaluation session of length L: after each of
// the first L-1 events the model ranks against the full training vocabulary
// (already revealed items stay recommendable); the immediate next event and
// the distinct set of remaining events are the ground truth. Quality metrics
// are averaged over prediction events. Sessions may be processed in
// parallel; partial results are folded in canonical session order, so the
// numbers do not depend on the thread count.
MetricReport run_protocol(const Model& model, const ExtensionStack& stack,
                          const SliceSplit& split, EvalRole role,
                          const MetricConfig& config, int threads = 1);

// Times fit, then runs the protocol single-threaded so per-event prediction
// latency is meaningful. Fills both time fields of the report.
MetricReport measure_times(const std::function<std::unique_ptr<Model>()>& fit,
                           const ExtensionStack& stack, const SliceSplit& split,
                           EvalRole role, const MetricConfig& config);

// JSON document for one report; quality metrics and timings are separate
// top-level sections ("metrics", "timing", "counts").
std::string report_to_json(const MetricReport& report);
MetricReport report_from_json(const std::string& json_text);

// Flat CSV rows, one per cutoff.
std::string report_csv_header();
void append_report_csv(std::string& out, const std::string& algorithm, int slice,
                       const MetricReport& report);

}  // namespace sessrec
