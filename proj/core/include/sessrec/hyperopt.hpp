#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace sessrec {

using ParamValue = std::variant<std::int64_t, double, std::string, bool>;

// Flat parameter assignment; the map keeps keys sorted, which makes the
// canonical JSON form stable.
using ParamConfig = std::map<std::string, ParamValue>;

struct ParamDomain {
  std::string name;
  std::vector<ParamValue> values;  // finite candidate set
};

// Two-phase search space: `joint` parameters are drawn together; `post_hoc`
// parameters are tuned afterwards with the joint winner frozen.
struct SearchSpace {
  std::vector<ParamDomain> joint;
  std::vector<ParamDomain> post_hoc;
};

// One independent uniform draw per domain. Deterministic in the seed.
ParamConfig sample_params(const std::vector<ParamDomain>& domains, std::uint64_t seed);

struct Trial {
  int index = 0;  // global: joint phase first, then post-hoc
  int phase = 0;  // 0 = joint, 1 = post-hoc
  ParamConfig params;
  double score = 0.0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
};

struct SearchResult {
  ParamConfig best;
  double best_score = 0.0;
  int best_trial = -1;
  std::vector<Trial> trials;
};

using Objective = std::function<double(const ParamConfig&)>;

struct SearchOptions {
  int joint_trials = 100;
  int post_hoc_trials = 100;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Seeded uniform random search. Duplicate draws are evaluated once and the
// score reused; an objective that throws or returns a non-finite value marks
// the trial failed with score -inf. The winner is the best score over all
// trials of both phases, earliest trial on ties. Trials may be evaluated in
// parallel; the log is always in trial order.
SearchResult random_search(const SearchSpace& space, const SearchOptions& options,
                           const Objective& objective);

// Canonical (sorted-key) JSON forms.
std::string params_to_json(const ParamConfig& params);
ParamConfig params_from_json(const std::string& json_text);
std::string search_result_to_json(const SearchResult& result);
SearchResult search_result_from_json(const std::string& json_text);

}  // namespace sessrec
