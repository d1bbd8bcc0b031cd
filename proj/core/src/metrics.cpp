#include "sessrec/metrics.hpp"

#include <algorithm>

namespace sessrec {

namespace {

// Rank of `next` within the top k, 0 when absent. Ranks are 1-based.
int rank_of(const ScoredList& list, ItemId next, int k) {
  const std::size_t limit = std::min(list.size(), static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < limit; ++i) {
    if (list.entries[i].item == next) return static_cast<int>(i) + 1;
  }
  return 0;
}

}  // namespace

double hit_at_k(const ScoredList& list, ItemId next, int k) {
  if (k < 1) throw ConfigError("cutoff k must be >= 1");
  return rank_of(list, next, k) > 0 ? 1.0 : 0.0;
}

double mrr_at_k(const ScoredList& list, ItemId next, int k) {
  if (k < 1) throw ConfigError("cutoff k must be >= 1");
  const int rank = rank_of(list, next, k);
  return rank > 0 ? 1.0 / rank : 0.0;
}

RankedSetMetrics ranked_set_metrics(const ScoredList& list,
                                    const std::unordered_set<ItemId>& remaining, int k) {
  if (k < 1) throw ConfigError("cutoff k must be >= 1");
  if (remaining.empty()) throw DataError("remaining item set must not be empty");

  const std::size_t limit = std::min(list.size(), static_cast<std::size_t>(k));
  int hits = 0;
  double precision_sum = 0.0;  // sum of precision@i at every relevant rank i
  for (std::size_t i = 0; i < limit; ++i) {
    if (remaining.count(list.entries[i].item) == 0) continue;
    ++hits;
    precision_sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }

  RankedSetMetrics out;
  out.precision = static_cast<double>(hits) / static_cast<double>(k);
  out.recall = static_cast<double>(hits) / static_cast<double>(remaining.size());
  const auto denom = std::min(remaining.size(), static_cast<std::size_t>(k));
  out.average_precision = precision_sum / static_cast<double>(denom);
  return out;
}

PopularityTable::PopularityTable(const SessionLog& train) {
  for (const Session& s : train.sessions) {
    for (const ItemId item : s.items) ++counts_[item];
  }
  bool first = true;
  for (const auto& [item, count] : counts_) {
    if (first || count < min_) min_ = count;
    if (first || count > max_) max_ = count;
    first = false;
  }
}

double PopularityTable::normalized(ItemId item) const {
  const auto it = counts_.find(item);
  if (it == counts_.end() || max_ <= min_) return 0.0;
  return static_cast<double>(it->second - min_) / static_cast<double>(max_ - min_);
}

}  // namespace sessrec
