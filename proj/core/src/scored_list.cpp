#include "sessrec/scored_list.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

namespace sessrec {

void sort_entries(std::vector<ScoredEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const ScoredEntry& a, const ScoredEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
  });
}

ScoredList make_scored(std::vector<ScoredEntry> entries) {
  std::unordered_set<ItemId> seen;
  seen.reserve(entries.size());
  for (const ScoredEntry& e : entries) {
    if (!std::isfinite(e.score)) {
      throw DataError("non-finite score for item " + std::to_string(e.item));
    }
    if (!seen.insert(e.item).second) {
      throw DataError("duplicate scored item " + std::to_string(e.item));
    }
  }
  sort_entries(entries);
  return ScoredList{std::move(entries)};
}

}  // namespace sessrec
