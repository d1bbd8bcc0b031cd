#include "sessrec/hyperopt.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "sessrec/rng.hpp"
#include "sessrec/types.hpp"

namespace sessrec {

namespace {

using nlohmann::json;

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

struct Outcome {
  double score = kMinusInf;
  bool failed = false;
  std::string error;
};

void check_domains(const std::vector<ParamDomain>& domains) {
  std::unordered_set<std::string> names;
  for (const ParamDomain& d : domains) {
    if (d.values.empty()) throw ConfigError("parameter '" + d.name + "' has no candidate values");
    if (!names.insert(d.name).second) {
      throw ConfigError("duplicate parameter '" + d.name + "' in search space");
    }
  }
}

json value_to_json(const ParamValue& value) {
  return std::visit([](const auto& v) { return json(v); }, value);
}

ParamValue value_from_json(const json& value) {
  if (value.is_boolean()) return value.get<bool>();
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) return value.get<double>();
  if (value.is_string()) return value.get<std::string>();
  throw DataError("parameter values must be numbers, strings or booleans");
}

// A drawn-but-not-yet-scored trial; `key` is the canonical JSON used to
// evaluate duplicate draws only once.
struct Pending {
  int index = 0;
  int phase = 0;
  ParamConfig params;
  std::uint64_t seed = 0;
  std::string key;
};

// Scores every distinct configuration exactly once, reusing the cache filled
// by earlier phases. Evaluation order never affects results, so spreading
// distinct configurations over threads is safe.
void evaluate_pending(const std::vector<Pending>& pending, const Objective& objective,
                      int threads, std::unordered_map<std::string, Outcome>& cache) {
  std::vector<const Pending*> fresh;
  std::unordered_set<std::string> queued;
  for (const Pending& p : pending) {
    if (cache.count(p.key) == 0 && queued.insert(p.key).second) fresh.push_back(&p);
  }

  auto score_one = [&objective](const Pending& p) {
    Outcome outcome;
    try {
      const double value = objective(p.params);
      if (std::isfinite(value)) {
        outcome.score = value;
      } else {
        outcome.failed = true;
        outcome.error = "objective returned a non-finite value";
      }
    } catch (const std::exception& e) {
      outcome.failed = true;
      outcome.error = e.what();
    }
    return outcome;
  };

  const int workers = std::max(1, threads);
  if (workers == 1 || fresh.size() <= 1) {
    for (const Pending* p : fresh) cache.emplace(p->key, score_one(*p));
    return;
  }
  std::vector<Outcome> outcomes(fresh.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= fresh.size()) return;
      outcomes[i] = score_one(*fresh[i]);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(static_cast<std::size_t>(workers), fresh.size());
  for (std::size_t i = 0; i < spawn; ++i) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  for (std::size_t i = 0; i < fresh.size(); ++i) cache.emplace(fresh[i]->key, outcomes[i]);
}

void append_trials(const std::vector<Pending>& pending,
                   const std::unordered_map<std::string, Outcome>& cache,
                   std::vector<Trial>& trials) {
  for (const Pending& p : pending) {
    const Outcome& outcome = cache.at(p.key);
    Trial t;
    t.index = p.index;
    t.phase = p.phase;
    t.params = p.params;
    t.score = outcome.score;
    t.seed = p.seed;
    t.failed = outcome.failed;
    t.error = outcome.error;
    trials.push_back(std::move(t));
  }
}

}  // namespace

ParamConfig sample_params(const std::vector<ParamDomain>& domains, std::uint64_t seed) {
  check_domains(domains);
  Rng rng(seed);
  ParamConfig params;
  for (const ParamDomain& d : domains) {
    params[d.name] = d.values[static_cast<std::size_t>(rng.bounded(d.values.size()))];
  }
  return params;
}

SearchResult random_search(const SearchSpace& space, const SearchOptions& options,
                           const Objective& objective) {
  if (options.joint_trials < 0 || options.post_hoc_trials < 0) {
    throw ConfigError("trial counts must be >= 0");
  }
  check_domains(space.joint);
  check_domains(space.post_hoc);

  std::unordered_map<std::string, Outcome> cache;
  SearchResult result;
  int next_index = 0;

  // Phase 0: draw every joint configuration independently.
  std::vector<Pending> joint;
  for (int i = 0; i < options.joint_trials; ++i) {
    Pending p;
    p.index = next_index++;
    p.phase = 0;
    p.seed = mix_seed(options.seed, static_cast<std::uint64_t>(p.index));
    p.params = sample_params(space.joint, p.seed);
    p.key = params_to_json(p.params);
    joint.push_back(std::move(p));
  }
  evaluate_pending(joint, objective, options.threads, cache);
  append_trials(joint, cache, result.trials);

  // Freeze the best joint configuration before the second phase.
  ParamConfig frozen;
  {
    double best = kMinusInf;
    bool found = false;
    for (const Trial& t : result.trials) {
      if (!found || t.score > best) {
        best = t.score;
        frozen = t.params;
        found = true;
      }
    }
  }

  // Phase 1: vary only the post-hoc parameters on top of the frozen winner.
  if (!space.post_hoc.empty()) {
    std::vector<Pending> post;
    for (int i = 0; i < options.post_hoc_trials; ++i) {
      Pending p;
      p.index = next_index++;
      p.phase = 1;
      p.seed = mix_seed(options.seed, static_cast<std::uint64_t>(p.index));
      p.params = frozen;
      for (auto& [name, value] : sample_params(space.post_hoc, p.seed)) {
        p.params[name] = std::move(value);
      }
      p.key = params_to_json(p.params);
      post.push_back(std::move(p));
    }
    evaluate_pending(post, objective, options.threads, cache);
    append_trials(post, cache, result.trials);
  }

  for (const Trial& t : result.trials) {
    if (result.best_trial == -1 || t.score > result.best_score) {
      result.best_score = t.score;
      result.best = t.params;
      result.best_trial = t.index;
    }
  }
  return result;
}

std::string params_to_json(const ParamConfig& params) {
  json doc = json::object();
  for (const auto& [name, value] : params) doc[name] = value_to_json(value);
  return doc.dump();
}

ParamConfig params_from_json(const std::string& json_text) {
  try {
    const json doc = json::parse(json_text);
    if (!doc.is_object()) throw DataError("parameter document must be a JSON object");
    ParamConfig params;
    for (const auto& [name, value] : doc.items()) params[name] = value_from_json(value);
    return params;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed parameter document: ") + e.what());
  }
}

std::string search_result_to_json(const SearchResult& result) {
  json trials = json::array();
  for (const Trial& t : result.trials) {
    json params = json::object();
    for (const auto& [name, value] : t.params) params[name] = value_to_json(value);
    trials.push_back({{"index", t.index},
                      {"phase", t.phase},
                      {"params", std::move(params)},
                      {"score", t.failed ? json() : json(t.score)},
                      {"seed", t.seed},
                      {"failed", t.failed},
                      {"error", t.error}});
  }
  json best = json::object();
  for (const auto& [name, value] : result.best) best[name] = value_to_json(value);
  const json doc = {{"best", std::move(best)},
                    {"best_score", std::isfinite(result.best_score) ? json(result.best_score)
                                                                    : json()},
                    {"best_trial", result.best_trial},
                    {"trials", std::move(trials)}};
  return doc.dump(2) + "\n";
}

SearchResult search_result_from_json(const std::string& json_text) {
  try {
    const json doc = json::parse(json_text);
    SearchResult result;
    for (const auto& [name, value] : doc.at("best").items()) {
      result.best[name] = value_from_json(value);
    }
    result.best_score = doc.at("best_score").is_null() ? kMinusInf
                                                       : doc.at("best_score").get<double>();
    result.best_trial = doc.at("best_trial").get<int>();
    for (const json& row : doc.at("trials")) {
      Trial t;
      t.index = row.at("index").get<int>();
      t.phase = row.at("phase").get<int>();
      for (const auto& [name, value] : row.at("params").items()) {
        t.params[name] = value_from_json(value);
      }
      t.score = row.at("score").is_null() ? kMinusInf : row.at("score").get<double>();
      t.seed = row.at("seed").get<std::uint64_t>();
      t.failed = row.at("failed").get<bool>();
      t.error = row.at("error").get<std::string>();
      result.trials.push_back(std::move(t));
    }
    return result;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed search result document: ") + e.what());
  }
}

}  // namespace sessrec
