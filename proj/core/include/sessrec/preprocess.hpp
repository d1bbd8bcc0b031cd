#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "sessrec/event_log.hpp"
#include "sessrec/session.hpp"

namespace sessrec {

struct PreprocessConfig {
  Timestamp inactivity_gap = 30 * 60;  // max pause (seconds) inside one session
  int min_item_support = 5;            // events per item within a slice
  int min_session_length = 2;          // events per session
  std::optional<int> max_session_length;  // truncate to this many leading events
  int min_user_sessions = 3;           // sessions per user within a slice
  int num_slices = 5;
  Timestamp skip_head = 0;             // seconds dropped from the start of the log
  double user_sample = 1.0;            // fraction of users kept (seeded)
};

// Train/validation/test portions of one evaluation slice. Validation is the
// second-to-last session per user and is never merged back into train.
struct SliceSplit {
  int slice_index = 0;
  SessionLog train;
  SessionLog validation;
  SessionLog test;
  std::set<ItemId> item_vocabulary;  // items present in train

  std::size_t events() const {
    return train.events() + validation.events() + test.events();
  }
};

// Equal-duration windows over [first session start, last session start]. The
// final window is closed on the right so the latest session is included.
struct TimeWindows {
  Timestamp first_start = 0;
  Timestamp last_start = 0;
  int count = 0;

  // Window index for a session start (exact integer arithmetic).
  int index_of(Timestamp start) const;
  // [low, high) of one window as reals; the last high equals last_start.
  std::pair<double, double> bounds(int index) const;
};

TimeWindows make_windows(const SessionLog& log, int n);

// Splits each user's event stream whenever the pause between consecutive
// events exceeds `inactivity_gap` (a pause equal to the gap stays in the same
// session). Session ids are assigned sequentially in canonical order.
SessionLog sessionize(const EventLog& log, Timestamp inactivity_gap);

// Assigns sessions to `n` equal-duration windows by start time.
// Throws ConfigError when n exceeds the number of distinct start times.
std::vector<SessionLog> slice_by_time(const SessionLog& log, int n);

// In-slice cleanup in one fixed, non-iterated order: truncate overlong
// sessions, drop events of unpopular items, drop short sessions, drop users
// with too few sessions.
SessionLog filter_slice(const SessionLog& slice, const PreprocessConfig& config);

// Per user: last session to test, second-to-last to validation, the rest to
// train. Items absent from train are removed from validation/test; sessions
// falling under two events are dropped. Throws DataError if any user has
// fewer than three sessions.
SliceSplit split_user_wise(const SessionLog& slice, int slice_index);

// Drops sessions starting before `earliest + skip_head`.
SessionLog drop_head(const SessionLog& log, Timestamp earliest, Timestamp skip_head);

// Keeps a seeded, order-independent sample of users (per-user hash draw).
SessionLog sample_users(const SessionLog& log, double fraction, std::uint64_t seed);

// Full chain: sessionize, optional head drop and user sampling, slice,
// filter, split. When `windows` is given it receives the slicing windows.
std::vector<SliceSplit> run_preprocess(const EventLog& log, const PreprocessConfig& config,
                                       std::uint64_t seed, TimeWindows* windows = nullptr);

}  // namespace sessrec
