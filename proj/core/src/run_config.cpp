#include "sessrec/run_config.hpp"

#include <fstream>
#include <unordered_set>

#include "json.hpp"

namespace sessrec {

namespace {

using nlohmann::json;

// Strictness helper: every consumed key is recorded and leftovers reported.
void reject_unknown(const json& object, const std::unordered_set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (known.count(key) == 0) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& object, const char* key, T fallback) {
  const auto it = object.find(key);
  if (it == object.end() || it->is_null()) return fallback;
  return it->get<T>();
}

ColumnFormat parse_format(const json& object) {
  reject_unknown(object,
                 {"user_column", "item_column", "time_column", "delimiter", "time_unit",
                  "action_column", "keep_action", "max_malformed"},
                 "dataset.format");
  ColumnFormat format;
  format.user_column = get_or<std::string>(object, "user_column", format.user_column);
  format.item_column = get_or<std::string>(object, "item_column", format.item_column);
  format.time_column = get_or<std::string>(object, "time_column", format.time_column);
  const std::string delimiter =
      get_or<std::string>(object, "delimiter", std::string(1, format.delimiter));
  if (delimiter.size() != 1) throw ConfigError("dataset.format.delimiter must be one character");
  format.delimiter = delimiter[0];
  const std::string unit = get_or<std::string>(object, "time_unit", "seconds");
  if (unit == "seconds") {
    format.time_unit = ColumnFormat::TimeUnit::seconds;
  } else if (unit == "milliseconds") {
    format.time_unit = ColumnFormat::TimeUnit::milliseconds;
  } else {
    throw ConfigError("dataset.format.time_unit must be 'seconds' or 'milliseconds'");
  }
  format.action_column = get_or<std::string>(object, "action_column", format.action_column);
  format.keep_action = get_or<std::string>(object, "keep_action", format.keep_action);
  format.max_malformed = get_or<std::size_t>(object, "max_malformed", format.max_malformed);
  if (!format.action_column.empty() && format.keep_action.empty()) {
    throw ConfigError("dataset.format.keep_action is required with action_column");
  }
  return format;
}

PreprocessConfig parse_preprocess(const json& object) {
  reject_unknown(object,
                 {"inactivity_gap_s", "min_item_support", "min_session_length",
                  "max_session_length", "min_user_sessions", "num_slices", "skip_head_s",
                  "user_sample"},
                 "preprocess");
  PreprocessConfig config;
  config.inactivity_gap = get_or<Timestamp>(object, "inactivity_gap_s", config.inactivity_gap);
  config.min_item_support = get_or<int>(object, "min_item_support", config.min_item_support);
  config.min_session_length =
      get_or<int>(object, "min_session_length", config.min_session_length);
  if (const auto it = object.find("max_session_length"); it != object.end() && !it->is_null()) {
    config.max_session_length = it->get<int>();
  }
  config.min_user_sessions = get_or<int>(object, "min_user_sessions", config.min_user_sessions);
  config.num_slices = get_or<int>(object, "num_slices", config.num_slices);
  config.skip_head = get_or<Timestamp>(object, "skip_head_s", config.skip_head);
  config.user_sample = get_or<double>(object, "user_sample", config.user_sample);
  return config;
}

AlgorithmEntry parse_algorithm_entry(const json& object, std::size_t index) {
  const std::string where = "algorithms[" + std::to_string(index) + "]";
  if (!object.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown(object, {"name", "params", "preset", "trials", "post_hoc_trials"}, where);
  AlgorithmEntry entry;
  if (const auto it = object.find("name"); it != object.end() && it->is_string()) {
    entry.name = it->get<std::string>();
  } else {
    throw ConfigError(where + " requires a string 'name'");
  }
  if (const auto it = object.find("params"); it != object.end() && !it->is_null()) {
    entry.params = params_from_json(it->dump());
  }
  if (const auto it = object.find("preset"); it != object.end() && !it->is_null()) {
    entry.preset = it->get<std::string>();
  }
  if (const auto it = object.find("trials"); it != object.end() && !it->is_null()) {
    entry.trials = it->get<int>();
  }
  if (const auto it = object.find("post_hoc_trials"); it != object.end() && !it->is_null()) {
    entry.post_hoc_trials = it->get<int>();
  }
  return entry;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open run config '" + file.string() + "'");
  json doc;
  try {
    in >> doc;
    if (!doc.is_object()) throw ConfigError("run config must be a JSON object");
    reject_unknown(doc,
                   {"dataset", "preprocess", "algorithms", "metrics", "tuning", "seed",
                    "threads", "timing", "out"},
                   "run config");

    RunConfig config;
    const auto dataset = doc.find("dataset");
    if (dataset == doc.end() || !dataset->is_object()) {
      throw ConfigError("run config requires a 'dataset' object");
    }
    reject_unknown(*dataset, {"name", "path", "format"}, "dataset");
    config.dataset.name = get_or<std::string>(*dataset, "name", config.dataset.name);
    const auto path = dataset->find("path");
    if (path == dataset->end() || !path->is_string()) {
      throw ConfigError("dataset.path is required");
    }
    config.dataset.path = path->get<std::string>();
    if (const auto it = dataset->find("format"); it != dataset->end() && !it->is_null()) {
      config.dataset.format = parse_format(*it);
    }

    if (const auto it = doc.find("preprocess"); it != doc.end() && !it->is_null()) {
      config.preprocess = parse_preprocess(*it);
    }

    if (const auto it = doc.find("algorithms"); it != doc.end() && !it->is_null()) {
      if (!it->is_array()) throw ConfigError("'algorithms' must be an array");
      for (std::size_t i = 0; i < it->size(); ++i) {
        config.algorithms.push_back(parse_algorithm_entry((*it)[i], i));
      }
    }

    if (const auto it = doc.find("metrics"); it != doc.end() && !it->is_null()) {
      reject_unknown(*it, {"cutoffs"}, "metrics");
      config.metrics.cutoffs = get_or<std::vector<int>>(*it, "cutoffs", config.metrics.cutoffs);
    }

    if (const auto it = doc.find("tuning"); it != doc.end() && !it->is_null()) {
      reject_unknown(*it, {"slice", "trials", "post_hoc_trials", "objective_cutoff"}, "tuning");
      if (const auto slice = it->find("slice"); slice != it->end() && !slice->is_null()) {
        config.tuning.slice = slice->get<int>();
      }
      config.tuning.trials = get_or<int>(*it, "trials", config.tuning.trials);
      config.tuning.post_hoc_trials =
          get_or<int>(*it, "post_hoc_trials", config.tuning.post_hoc_trials);
      config.tuning.objective_cutoff =
          get_or<int>(*it, "objective_cutoff", config.tuning.objective_cutoff);
    }

    config.seed = get_or<std::uint64_t>(doc, "seed", config.seed);
    config.threads = get_or<int>(doc, "threads", config.threads);
    config.timing = get_or<bool>(doc, "timing", config.timing);
    config.out = get_or<std::string>(doc, "out", config.out.string());
    if (config.threads < 1) throw ConfigError("threads must be >= 1");
    return config;
  } catch (const json::exception& e) {
    throw ConfigError("invalid run config '" + file.string() + "': " + e.what());
  }
}

void apply_overrides(RunConfig& config, const CliOverrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.out) config.out = *overrides.out;
  if (overrides.threads) config.threads = *overrides.threads;
  if (overrides.cutoffs) config.metrics.cutoffs = *overrides.cutoffs;
  if (overrides.timing) config.timing = *overrides.timing;
  if (overrides.tune_slice) config.tuning.slice = *overrides.tune_slice;
  if (overrides.trials) config.tuning.trials = *overrides.trials;
  if (config.threads < 1) throw ConfigError("threads must be >= 1");
}

}  // namespace sessrec
