#pragma once

#include <cstddef>
#include <vector>

#include "sessrec/types.hpp"

namespace sessrec {

struct ScoredEntry {
  ItemId item = 0;
  double score = 0.0;

  friend bool operator==(const ScoredEntry&, const ScoredEntry&) = default;
};

// A ranking: score descending, ties by ascending item id, item ids unique,
// scores finite. Produced cutoff-independent; callers truncate to their k.
struct ScoredList {
  std::vector<ScoredEntry> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }

  friend bool operator==(const ScoredList&, const ScoredList&) = default;
};

// Canonical ordering used everywhere a ranking is produced.
void sort_entries(std::vector<ScoredEntry>& entries);

// Sorts and validates (finite scores, unique items). Throws DataError.
ScoredList make_scored(std::vector<ScoredEntry> entries);

}  // namespace sessrec
