#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sessrec/preprocess.hpp"

namespace sessrec {

// On-disk layout inside one dataset directory:
//   slice_<i>/train.csv, slice_<i>/validation.csv, slice_<i>/test.csv
//   users.csv, items.csv        (dense <-> external id mappings)
//   manifest.json               (config echo, window bounds, per-role counts)
// Split rows are one event each: session_id,user_id,item_id,timestamp, with
// the external identifiers. Loading re-applies the persisted mappings, so a
// save/load round trip reproduces the splits exactly.

void save_splits(const std::vector<SliceSplit>& splits, const std::filesystem::path& dir,
                 const IdIndexer& users, const IdIndexer& items,
                 const PreprocessConfig& config, std::uint64_t seed,
                 const std::string& dataset_name, const TimeWindows& windows);

SliceSplit load_split(const std::filesystem::path& dir, int slice_index);
std::vector<SliceSplit> load_splits(const std::filesystem::path& dir);

struct ManifestInfo {
  std::string dataset;
  int num_slices = 0;
  std::uint64_t seed = 0;
};

ManifestInfo read_manifest(const std::filesystem::path& dir);

}  // namespace sessrec
