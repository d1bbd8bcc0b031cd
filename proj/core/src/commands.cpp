#include "sessrec/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "sessrec/model_io.hpp"
#include "sessrec/presets.hpp"
#include "sessrec/rng.hpp"
#include "sessrec/split_io.hpp"
#include "sessrec/variant.hpp"

namespace sessrec {

namespace {

std::filesystem::path dataset_dir(const RunConfig& config) {
  return config.out / config.dataset.name;
}

std::filesystem::path algorithm_dir(const RunConfig& config, int slice,
                                    const std::string& name) {
  return dataset_dir(config) / ("slice_" + std::to_string(slice)) / name;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw DataError("cannot open '" + file.string() + "' for writing");
  out << text;
  if (!out) throw DataError("failed writing '" + file.string() + "'");
}

std::optional<std::string> read_text(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// The designated tuning slice: an explicit choice, or the slice holding the
// most events (earliest index on ties).
int tuning_slice(const RunConfig& config, const std::vector<SliceSplit>& splits) {
  if (config.tuning.slice) {
    const int slice = *config.tuning.slice;
    if (slice < 0 || slice >= static_cast<int>(splits.size())) {
      throw ConfigError("tuning slice " + std::to_string(slice) + " is out of range (have " +
                        std::to_string(splits.size()) + " slices)");
    }
    return slice;
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(splits.size()); ++i) {
    if (splits[i].events() > splits[best].events()) best = i;
  }
  return best;
}

void require_algorithms(const RunConfig& config) {
  if (config.algorithms.empty()) throw ConfigError("no algorithms configured");
}

// Most specific source wins: explicit params, then the tuned search result
// on disk, then the named preset, then built-in defaults.
ParamConfig resolve_params(const RunConfig& config, const AlgorithmEntry& entry,
                           const AlgorithmSpec& spec, int tune_slice, std::ostream& log) {
  if (entry.params) return *entry.params;
  const auto search_file = algorithm_dir(config, tune_slice, entry.name) / "search.json";
  if (const auto text = read_text(search_file)) {
    const SearchResult result = search_result_from_json(*text);
    log << entry.name << ": using tuned parameters from " << search_file.string() << "\n";
    return result.best;
  }
  if (entry.preset) {
    log << entry.name << ": using the '" << *entry.preset << "' preset\n";
    return preset_optimum(spec, *entry.preset);
  }
  log << entry.name << ": using built-in defaults\n";
  return {};
}

int largest_cutoff(const MetricConfig& metrics) {
  if (metrics.cutoffs.empty()) throw ConfigError("at least one metric cutoff is required");
  return *std::max_element(metrics.cutoffs.begin(), metrics.cutoffs.end());
}

}  // namespace

void cmd_preprocess(const RunConfig& config, std::ostream& log) {
  LoadReport load_report;
  const EventLog events = load_events(config.dataset.path, config.dataset.format, &load_report);
  const LogStats stats = log_stats(events);
  log << "loaded " << stats.events << " events (" << stats.users << " users, " << stats.items
      << " items, span " << stats.time_span << " s); " << load_report.rows_malformed
      << " malformed, " << load_report.rows_filtered << " filtered\n";

  TimeWindows windows;
  const std::vector<SliceSplit> splits =
      run_preprocess(events, config.preprocess, config.seed, &windows);

  const std::filesystem::path dir = dataset_dir(config);
  save_splits(splits, dir, events.users, events.items, config.preprocess, config.seed,
              config.dataset.name, windows);
  for (const SliceSplit& split : splits) {
    log << "slice " << split.slice_index << ": train " << split.train.size()
        << " sessions, validation " << split.validation.size() << ", test "
        << split.test.size() << ", vocabulary " << split.item_vocabulary.size() << "\n";
  }
  log << "wrote " << splits.size() << " slices under " << dir.string() << "\n";
}

void cmd_tune(const RunConfig& config, bool resume, std::ostream& log) {
  require_algorithms(config);
  const std::filesystem::path dir = dataset_dir(config);
  read_manifest(dir);
  const std::vector<SliceSplit> splits = load_splits(dir);
  const int slice = tuning_slice(config, splits);
  const SliceSplit& split = splits[static_cast<std::size_t>(slice)];
  const MetricConfig objective_metrics{{config.tuning.objective_cutoff}};
  log << "tuning on slice " << slice << " (" << split.events() << " events)\n";

  for (std::size_t index = 0; index < config.algorithms.size(); ++index) {
    const AlgorithmEntry& entry = config.algorithms[index];
    const AlgorithmSpec spec = parse_algorithm(entry.name);

    SearchOptions options;
    options.joint_trials = entry.trials.value_or(config.tuning.trials);
    options.post_hoc_trials = entry.post_hoc_trials.value_or(config.tuning.post_hoc_trials);
    options.seed = mix_seed(config.seed, static_cast<std::uint64_t>(index));
    options.threads = 1;  // parallelism lives inside the protocol run

    const SearchSpace space = preset_space(spec);
    const int expected = options.joint_trials +
                         (space.post_hoc.empty() ? 0 : options.post_hoc_trials);
    const auto search_file = algorithm_dir(config, slice, entry.name) / "search.json";
    if (resume) {
      if (const auto text = read_text(search_file)) {
        try {
          const SearchResult cached = search_result_from_json(*text);
          if (static_cast<int>(cached.trials.size()) == expected) {
            log << entry.name << ": already tuned (" << cached.trials.size()
                << " trials), skipping\n";
            continue;
          }
        } catch (const DataError&) {
          // Unreadable cache: fall through and redo the search.
        }
      }
    }

    const Objective objective = [&](const ParamConfig& params) {
      const BuiltAlgorithm built = build_algorithm(spec, params);
      const std::unique_ptr<Model> model = built.fit(split.train);
      const MetricReport report = run_protocol(*model, built.stack, split,
                                               EvalRole::validation, objective_metrics,
                                               config.threads);
      return report.at.at(config.tuning.objective_cutoff).mrr;
    };

    const SearchResult result = random_search(space, options, objective);
    write_text(search_file, search_result_to_json(result));
    log << entry.name << ": best MRR@" << config.tuning.objective_cutoff << " "
        << result.best_score << " (trial " << result.best_trial << ", "
        << result.trials.size() << " trials) -> " << search_file.string() << "\n";
  }
}

void cmd_eval(const RunConfig& config, std::ostream& log) {
  require_algorithms(config);
  const std::filesystem::path dir = dataset_dir(config);
  read_manifest(dir);
  const std::vector<SliceSplit> splits = load_splits(dir);
  const int tune_slice = tuning_slice(config, splits);
  const int headline = largest_cutoff(config.metrics);

  for (const AlgorithmEntry& entry : config.algorithms) {
    const AlgorithmSpec spec = parse_algorithm(entry.name);
    const ParamConfig params = resolve_params(config, entry, spec, tune_slice, log);
    const BuiltAlgorithm built = build_algorithm(spec, params);

    for (const SliceSplit& split : splits) {
      MetricReport report;
      if (config.timing) {
        report = measure_times([&] { return built.fit(split.train); }, built.stack, split,
                               EvalRole::test, config.metrics);
      } else {
        const std::unique_ptr<Model> model = built.fit(split.train);
        report = run_protocol(*model, built.stack, split, EvalRole::test, config.metrics,
                              config.threads);
      }

      const auto out_dir = algorithm_dir(config, split.slice_index, entry.name);
      write_text(out_dir / "report.json", report_to_json(report));
      std::string csv = report_csv_header();
      append_report_csv(csv, entry.name, split.slice_index, report);
      write_text(out_dir / "report.csv", csv);

      log << entry.name << " slice " << split.slice_index << ": MRR@" << headline << " "
          << report.at.at(headline).mrr << ", MAP@" << headline << " "
          << report.at.at(headline).map;
      if (config.timing) {
        log << " (fit " << report.training_time_s << " s, "
            << report.mean_prediction_time_ms << " ms/event)";
      }
      log << "\n";
    }
  }
}

void cmd_report(const RunConfig& config, int sort_cutoff, std::ostream& log) {
  require_algorithms(config);
  const std::filesystem::path dir = dataset_dir(config);
  const ManifestInfo manifest = read_manifest(dir);
  const int cutoff = sort_cutoff > 0 ? sort_cutoff : largest_cutoff(config.metrics);

  struct Row {
    std::string algorithm;
    int slices_found = 0;
    std::map<int, CutoffMetrics> mean;  // keyed by cutoff
  };
  std::vector<Row> rows;
  for (const AlgorithmEntry& entry : config.algorithms) {
    Row row;
    row.algorithm = entry.name;
    std::map<int, CutoffMetrics> sums;
    for (int slice = 0; slice < manifest.num_slices; ++slice) {
      const auto file = algorithm_dir(config, slice, entry.name) / "report.json";
      const auto text = read_text(file);
      if (!text) {
        log << "warning: " << file.string() << " is missing; row is incomplete\n";
        continue;
      }
      const MetricReport report = report_from_json(*text);
      ++row.slices_found;
      for (const auto& [k, m] : report.at) {
        CutoffMetrics& sum = sums[k];
        sum.hit_rate += m.hit_rate;
        sum.mrr += m.mrr;
        sum.precision += m.precision;
        sum.recall += m.recall;
        sum.map += m.map;
        sum.coverage += m.coverage;
        sum.popularity += m.popularity;
      }
    }
    if (row.slices_found == 0) continue;
    const double n = static_cast<double>(row.slices_found);
    for (auto& [k, sum] : sums) {
      row.mean[k] = {sum.hit_rate / n, sum.mrr / n,      sum.precision / n, sum.recall / n,
                     sum.map / n,      sum.coverage / n, sum.popularity / n};
    }
    if (row.mean.count(cutoff) == 0) {
      throw ConfigError("reports for '" + entry.name + "' lack cutoff " +
                        std::to_string(cutoff));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("no report files found under " + dir.string());

  std::sort(rows.begin(), rows.end(), [cutoff](const Row& a, const Row& b) {
    const double ma = a.mean.at(cutoff).map;
    const double mb = b.mean.at(cutoff).map;
    if (ma != mb) return ma > mb;
    return a.algorithm < b.algorithm;
  });

  std::string csv =
      "algorithm,slices,cutoff,hit_rate,mrr,precision,recall,map,coverage,popularity\n";
  for (const Row& row : rows) {
    for (const auto& [k, m] : row.mean) {
      char buffer[320];
      std::snprintf(buffer, sizeof(buffer), "%s,%d,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                    row.algorithm.c_str(), row.slices_found, k, m.hit_rate, m.mrr, m.precision,
                    m.recall, m.map, m.coverage, m.popularity);
      csv += buffer;
    }
  }
  write_text(dir / "summary.csv", csv);

  std::string table = "slice means over " + std::to_string(manifest.num_slices) +
                      " slices, ordered by MAP@" + std::to_string(cutoff) + "\n\n";
  char header[200];
  std::snprintf(header, sizeof(header), "%-14s %8s %8s %8s %8s %8s %8s %8s %s\n", "algorithm",
                "map", "mrr", "hr", "prec", "recall", "cover", "pop", "slices");
  table += header;
  for (const Row& row : rows) {
    const CutoffMetrics& m = row.mean.at(cutoff);
    char line[240];
    std::snprintf(line, sizeof(line),
                  "%-14s %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %d/%d%s\n",
                  row.algorithm.c_str(), m.map, m.mrr, m.hit_rate, m.precision, m.recall,
                  m.coverage, m.popularity, row.slices_found, manifest.num_slices,
                  row.slices_found < manifest.num_slices ? " (incomplete)" : "");
    table += line;
  }
  write_text(dir / "summary.txt", table);
  log << table;
}

}  // namespace sessrec
