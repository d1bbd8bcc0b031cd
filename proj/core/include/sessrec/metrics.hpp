#pragma once

#include <unordered_map>
#include <unordered_set>

#include "sessrec/scored_list.hpp"
#include "sessrec/session.hpp"

namespace sessrec {

// 1 if `next` ranks within the top k, else 0.
double hit_at_k(const ScoredList& list, ItemId next, int k);

// 1/rank if `next` ranks within the top k, else 0.
double mrr_at_k(const ScoredList& list, ItemId next, int k);

struct RankedSetMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double average_precision = 0.0;
};

// Set-based metrics of the top k against the distinct items still to come.
// Precision divides by k, recall by |remaining|, and average precision by
// min(|remaining|, k). `remaining` must not be empty.
RankedSetMetrics ranked_set_metrics(const ScoredList& list,
                                    const std::unordered_set<ItemId>& remaining, int k);

// Per-item interaction counts over the training sessions, min-max scaled to
// [0, 1]. When every count is equal the scale degenerates to 0.
class PopularityTable {
 public:
  explicit PopularityTable(const SessionLog& train);

  // Scaled popularity; 0 for items never seen in training.
  double normalized(ItemId item) const;

 private:
  std::unordered_map<ItemId, std::int64_t> counts_;
  std::int64_t min_ = 0;
  std::int64_t max_ = 0;
};

}  // namespace sessrec
