#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sessrec/scored_list.hpp"
#include "sessrec/session.hpp"

namespace sessrec {

// Everything a recommender may look at when scoring the next item: the
// revealed part of the ongoing session, the user's earlier sessions from the
// training portion (start-ascending), and the anchor `now` — the ongoing
// session's start time. History sessions all start before `now`.
struct PredictionContext {
  Session current;
  std::vector<const Session*> history;
  Timestamp now = 0;
};

// A fitted recommender. Immutable after fit; predict is const and safe to
// call concurrently. Identical inputs always produce identical rankings.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string_view method() const = 0;

  // Full ranking over candidate items with nonzero score.
  virtual ScoredList predict(const PredictionContext& ctx) const = 0;

  // Similarity between the context session and an arbitrary past session, as
  // this model weighs neighbors. Methods without a session similarity return
  // nullopt.
  virtual std::optional<double> session_weight(const PredictionContext& ctx,
                                               const Session& past) const;

  // Method-specific state as a JSON object string (no envelope); the inverse
  // lives next to each fit function. Used by save_model/load_model.
  virtual std::string save_payload() const = 0;
};

}  // namespace sessrec
