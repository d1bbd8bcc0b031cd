#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sessrec/types.hpp"

namespace sessrec {

// Bidirectional mapping between external identifiers and the dense ids used
// internally. Dense ids are assigned by first encounter, so the mapping is a
// pure function of the encounter order.
class IdIndexer {
 public:
  // Returns the dense id for `external`, assigning the next one if new.
  std::int64_t intern(std::int64_t external);

  // Dense id if `external` is known.
  std::optional<std::int64_t> find(std::int64_t external) const;

  // External id for a known dense id.
  std::int64_t external(std::int64_t dense) const;

  std::size_t size() const { return to_external_.size(); }

  friend bool operator==(const IdIndexer& a, const IdIndexer& b) {
    return a.to_external_ == b.to_external_;
  }

 private:
  std::vector<std::int64_t> to_external_;
  std::unordered_map<std::int64_t, std::int64_t> to_dense_;
};

// Column layout of a delimited event file. The header row is required.
struct ColumnFormat {
  std::string user_column = "user_id";
  std::string item_column = "item_id";
  std::string time_column = "timestamp";
  char delimiter = ',';

  enum class TimeUnit { seconds, milliseconds };
  TimeUnit time_unit = TimeUnit::seconds;  // milliseconds are floored to seconds

  // When action_column is non-empty, only rows whose action cell equals
  // keep_action are loaded; other rows are filtered, not malformed.
  std::string action_column;
  std::string keep_action;

  // Malformed rows tolerated before the load fails. Zero means strict.
  std::size_t max_malformed = 0;
};

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
  std::size_t rows_malformed = 0;
  std::size_t rows_filtered = 0;  // dropped by the action filter
};

// Canonical event log: events sorted by (user, time, item) on the external
// ids, then re-mapped to dense ids. Duplicate rows are kept.
struct EventLog {
  std::vector<Event> events;  // dense ids, canonical order
  IdIndexer users;
  IdIndexer items;
  std::string source;

  friend bool operator==(const EventLog& a, const EventLog& b) {
    return a.events == b.events && a.users == b.users && a.items == b.items;
  }
};

struct LogStats {
  std::size_t events = 0;
  std::size_t users = 0;
  std::size_t items = 0;
  Timestamp time_span = 0;  // newest minus oldest timestamp, 0 when empty
};

// Reads a delimited event file into canonical form. Throws DataError for a
// missing/empty file or malformed rows beyond the tolerance, ConfigError for
// unusable format settings (e.g. a column missing from the header).
EventLog load_events(const std::filesystem::path& file, const ColumnFormat& format,
                     LoadReport* report = nullptr);

// Builds a canonical log from already-decoded rows carrying external ids.
EventLog make_event_log(std::vector<Event> raw, std::string source = "");

// Writes the log back out with its external identifiers in the same layout;
// loading the written file reproduces the log byte for byte.
void save_events(const EventLog& log, const std::filesystem::path& file,
                 const ColumnFormat& format);

// Persists one id mapping as CSV with columns <kind>_dense,<kind>_external.
void save_id_map(const IdIndexer& index, const std::filesystem::path& file,
                 const std::string& kind);

// Reads a mapping written by save_id_map.
IdIndexer load_id_map(const std::filesystem::path& file);

LogStats log_stats(const EventLog& log);

}  // namespace sessrec
