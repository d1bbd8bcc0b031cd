#pragma once

#include <string>
#include <vector>

#include "sessrec/hyperopt.hpp"
#include "sessrec/variant.hpp"

namespace sessrec {

// The search domains shipped for every algorithm variant: base-method
// parameters plus boost/extend in the joint phase and reminder weights in
// the post-hoc phase, matching the variant's suffix.
SearchSpace preset_space(const AlgorithmSpec& spec);

// Tuned starting points shipped for the bundled dataset families. Throws
// ConfigError for an unknown dataset family or an unavailable combination.
ParamConfig preset_optimum(const AlgorithmSpec& spec, const std::string& dataset);

// Dataset family names accepted by preset_optimum.
std::vector<std::string> preset_datasets();

}  // namespace sessrec
