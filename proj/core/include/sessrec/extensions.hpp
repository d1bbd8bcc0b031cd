#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sessrec/model.hpp"

namespace sessrec {

// Pads a short ongoing session with the user's most recent earlier events
// until it reaches `desired_length` (or history runs out). Prepended events
// keep their original order and timestamps; the anchor `now` is unchanged.
struct ExtendConfig {
  int desired_length = 1;
};

// Multiplies the score of every item the user has interacted with before by
// (1 + factor), once, regardless of how often it occurred.
struct BoostConfig {
  double factor = 0.0;
};

// Re-ranks by blending the base relevance with two reminder signals computed
// over the user's last `past_sessions` sessions: interaction recency and
// session similarity. Each component is min-max scaled over the candidate
// set before weighting.
struct RemindConfig {
  int past_sessions = 1;
  int weight_rel = 1;
  int weight_irec = 0;
  int weight_ssim = 0;
};

PredictionContext extend_session(const PredictionContext& ctx, const ExtendConfig& config);

ScoredList boost_scores(const ScoredList& base, const PredictionContext& ctx,
                        const BoostConfig& config);

// Recency score now / (now - t) where t is the item's latest interaction in
// the user's last `past_sessions` sessions. Throws DataError when the item
// does not occur there, or occurs at or after `now`.
double irec_score(const PredictionContext& ctx, ItemId item, int past_sessions);

// Sum of similarities of the recent sessions that contain `item`.
double ssim_score(ItemId item,
                  const std::vector<std::pair<const Session*, double>>& recent_sims);

// Candidates are the base-scored items plus every item of the recent
// sessions; missing components enter normalization as raw 0, and a component
// with no spread scales to 0 for everyone. Pass null `recent_sims` when the
// base model has no session similarity — the similarity weight is then
// forced to 0.
ScoredList remind_combine(const ScoredList& base, const PredictionContext& ctx,
                          const RemindConfig& config,
                          const std::vector<std::pair<const Session*, double>>* recent_sims);

// The wrappers a variant applies around its base model, always in the same
// order: extend the context, predict, boost, remind.
struct ExtensionStack {
  std::optional<ExtendConfig> extend;
  std::optional<BoostConfig> boost;
  std::optional<RemindConfig> remind;
};

ScoredList predict_with_extensions(const Model& model, const PredictionContext& ctx,
                                   const ExtensionStack& stack);

}  // namespace sessrec
