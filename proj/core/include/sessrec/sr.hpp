#pragma once

#include <memory>

#include "sessrec/model.hpp"
#include "sessrec/weighting.hpp"

namespace sessrec {

// Association rules over ordered in-session item pairs at most `steps`
// positions apart; nearer pairs contribute more under the chosen scheme.
// Prediction ranks the consequents of the last context item.
struct SrConfig {
  int steps = 10;
  Weighting weighting = Weighting::div;  // `same` is not a valid pair scheme
};

// Throws DataError on an empty training log, ConfigError on bad settings.
std::unique_ptr<Model> fit_sr(const SessionLog& train, const SrConfig& config);

// Rebuilds a model from its save_payload() string.
std::unique_ptr<Model> sr_from_payload(const std::string& payload);

}  // namespace sessrec
