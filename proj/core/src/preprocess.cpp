#include "sessrec/preprocess.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <unordered_map>

#include "sessrec/rng.hpp"

namespace sessrec {

namespace {

void validate(const PreprocessConfig& config) {
  if (config.inactivity_gap <= 0) throw ConfigError("inactivity_gap must be positive");
  if (config.min_item_support < 1) throw ConfigError("min_item_support must be >= 1");
  if (config.min_session_length < 2) throw ConfigError("min_session_length must be >= 2");
  if (config.max_session_length && *config.max_session_length < 1) {
    throw ConfigError("max_session_length must be >= 1");
  }
  if (config.min_user_sessions < 3) throw ConfigError("min_user_sessions must be >= 3");
  if (config.num_slices < 1) throw ConfigError("num_slices must be >= 1");
  if (config.skip_head < 0) throw ConfigError("skip_head must be >= 0");
  if (config.user_sample <= 0.0 || config.user_sample > 1.0) {
    throw ConfigError("user_sample must be in (0, 1]");
  }
}

}  // namespace

int TimeWindows::index_of(Timestamp start) const {
  if (count == 1 || last_start == first_start) return 0;
  if (start >= last_start) return count - 1;  // the last window is right-closed
  // floor((start - first) * count / span) is exact in 64-bit for any
  // realistic span (seconds) and window count.
  const std::int64_t offset = start - first_start;
  const std::int64_t span = last_start - first_start;
  return static_cast<int>(offset * count / span);
}

std::pair<double, double> TimeWindows::bounds(int index) const {
  const double span = static_cast<double>(last_start - first_start);
  const double width = span / count;
  const double lo = static_cast<double>(first_start) + width * index;
  const double hi = index == count - 1 ? static_cast<double>(last_start)
                                       : static_cast<double>(first_start) + width * (index + 1);
  return {lo, hi};
}

TimeWindows make_windows(const SessionLog& log, int n) {
  if (n < 1) throw ConfigError("slice count must be >= 1");
  if (log.sessions.empty()) throw DataError("cannot slice an empty session log");
  std::set<Timestamp> starts;
  for (const Session& s : log.sessions) starts.insert(s.start_time());
  if (static_cast<std::size_t>(n) > starts.size()) {
    throw ConfigError("slice count " + std::to_string(n) + " exceeds the " +
                      std::to_string(starts.size()) + " distinct session start times");
  }
  return TimeWindows{*starts.begin(), *starts.rbegin(), n};
}

SessionLog sessionize(const EventLog& log, Timestamp inactivity_gap) {
  if (inactivity_gap <= 0) throw ConfigError("inactivity gap must be positive");

  std::vector<Session> sessions;
  SessionId next_id = 0;
  // Canonical order groups each user's events contiguously, time-ascending.
  std::size_t i = 0;
  while (i < log.events.size()) {
    const UserId user = log.events[i].user;
    std::size_t j = i;
    while (j < log.events.size() && log.events[j].user == user) ++j;

    Session current;
    current.id = next_id;
    current.user = user;
    for (std::size_t e = i; e < j; ++e) {
      const Event& ev = log.events[e];
      if (!current.items.empty() && ev.time - current.times.back() > inactivity_gap) {
        sessions.push_back(std::move(current));
        current = Session{};
        current.id = ++next_id;
        current.user = user;
      }
      current.items.push_back(ev.item);
      current.times.push_back(ev.time);
    }
    sessions.push_back(std::move(current));
    ++next_id;
    i = j;
  }
  return make_session_log(std::move(sessions));
}

std::vector<SessionLog> slice_by_time(const SessionLog& log, int n) {
  const TimeWindows windows = make_windows(log, n);
  std::vector<std::vector<Session>> buckets(static_cast<std::size_t>(n));
  for (const Session& s : log.sessions) {
    buckets[static_cast<std::size_t>(windows.index_of(s.start_time()))].push_back(s);
  }
  std::vector<SessionLog> slices;
  slices.reserve(buckets.size());
  for (auto& bucket : buckets) slices.push_back(make_session_log(std::move(bucket)));
  return slices;
}

SessionLog filter_slice(const SessionLog& slice, const PreprocessConfig& config) {
  validate(config);

  // 1. Truncate overlong sessions to their leading events.
  std::vector<Session> sessions = slice.sessions;
  if (config.max_session_length) {
    const auto cap = static_cast<std::size_t>(*config.max_session_length);
    for (Session& s : sessions) {
      if (s.items.size() > cap) {
        s.items.resize(cap);
        s.times.resize(cap);
      }
    }
  }

  // 2. Drop events of items below the support threshold (counted after
  //    truncation, once — the pass is not iterated).
  std::unordered_map<ItemId, int> support;
  for (const Session& s : sessions) {
    for (const ItemId item : s.items) ++support[item];
  }
  for (Session& s : sessions) {
    std::vector<ItemId> items;
    std::vector<Timestamp> times;
    for (std::size_t i = 0; i < s.items.size(); ++i) {
      if (support[s.items[i]] >= config.min_item_support) {
        items.push_back(s.items[i]);
        times.push_back(s.times[i]);
      }
    }
    s.items = std::move(items);
    s.times = std::move(times);
  }

  // 3. Drop sessions that became too short.
  std::erase_if(sessions, [&](const Session& s) {
    return s.items.size() < static_cast<std::size_t>(config.min_session_length);
  });

  // 4. Drop users with too few remaining sessions.
  std::unordered_map<UserId, int> sessions_per_user;
  for (const Session& s : sessions) ++sessions_per_user[s.user];
  std::erase_if(sessions, [&](const Session& s) {
    return sessions_per_user[s.user] < config.min_user_sessions;
  });

  return make_session_log(std::move(sessions));
}

SliceSplit split_user_wise(const SessionLog& slice, int slice_index) {
  SliceSplit split;
  split.slice_index = slice_index;

  std::vector<Session> train;
  std::vector<Session> validation;
  std::vector<Session> test;
  for (const auto& [user, positions] : slice.by_user) {
    if (positions.size() < 3) {
      throw DataError("user " + std::to_string(user) + " has only " +
                      std::to_string(positions.size()) + " sessions; 3 are required to split");
    }
    for (std::size_t i = 0; i + 2 < positions.size(); ++i) {
      train.push_back(slice.sessions[positions[i]]);
    }
    validation.push_back(slice.sessions[positions[positions.size() - 2]]);
    test.push_back(slice.sessions[positions[positions.size() - 1]]);
  }

  for (const Session& s : train) {
    split.item_vocabulary.insert(s.items.begin(), s.items.end());
  }

  // Keep only in-vocabulary events; drop sessions that fall under two.
  const auto restrict = [&](std::vector<Session>& sessions) {
    for (Session& s : sessions) {
      std::vector<ItemId> items;
      std::vector<Timestamp> times;
      for (std::size_t i = 0; i < s.items.size(); ++i) {
        if (split.item_vocabulary.count(s.items[i]) != 0) {
          items.push_back(s.items[i]);
          times.push_back(s.times[i]);
        }
      }
      s.items = std::move(items);
      s.times = std::move(times);
    }
    std::erase_if(sessions, [](const Session& s) { return s.items.size() < 2; });
  };
  restrict(validation);
  restrict(test);

  split.train = make_session_log(std::move(train));
  split.validation = make_session_log(std::move(validation));
  split.test = make_session_log(std::move(test));
  return split;
}

SessionLog drop_head(const SessionLog& log, Timestamp earliest, Timestamp skip_head) {
  if (skip_head < 0) throw ConfigError("skip_head must be >= 0");
  std::vector<Session> kept;
  for (const Session& s : log.sessions) {
    if (s.start_time() >= earliest + skip_head) kept.push_back(s);
  }
  return make_session_log(std::move(kept));
}

SessionLog sample_users(const SessionLog& log, double fraction, std::uint64_t seed) {
  if (fraction <= 0.0 || fraction > 1.0) throw ConfigError("user_sample must be in (0, 1]");
  if (fraction == 1.0) return log;
  // Per-user hash draw: membership is independent of the user set, so adding
  // or removing other users never flips a decision.
  const auto threshold = static_cast<std::uint64_t>(
      fraction * 18446744073709551615.0);  // fraction * (2^64 - 1)
  std::vector<Session> kept;
  for (const Session& s : log.sessions) {
    if (mix_seed(seed, static_cast<std::uint64_t>(s.user)) <= threshold) kept.push_back(s);
  }
  return make_session_log(std::move(kept));
}

std::vector<SliceSplit> run_preprocess(const EventLog& log, const PreprocessConfig& config,
                                       std::uint64_t seed, TimeWindows* windows) {
  validate(config);
  if (log.events.empty()) throw DataError("event log is empty");

  SessionLog sessions = sessionize(log, config.inactivity_gap);
  if (config.skip_head > 0) {
    Timestamp earliest = log.events.front().time;
    for (const Event& e : log.events) earliest = std::min(earliest, e.time);
    sessions = drop_head(sessions, earliest, config.skip_head);
  }
  if (config.user_sample < 1.0) {
    sessions = sample_users(sessions, config.user_sample, seed);
  }
  if (sessions.sessions.empty()) {
    throw DataError("no sessions left after head drop / user sampling");
  }

  if (windows != nullptr) *windows = make_windows(sessions, config.num_slices);
  const std::vector<SessionLog> slices = slice_by_time(sessions, config.num_slices);
  std::vector<SliceSplit> splits;
  splits.reserve(slices.size());
  for (std::size_t i = 0; i < slices.size(); ++i) {
    const SessionLog filtered = filter_slice(slices[i], config);
    if (filtered.sessions.empty()) {
      throw DataError("slice " + std::to_string(i) + " is empty after filtering");
    }
    splits.push_back(split_user_wise(filtered, static_cast<int>(i)));
  }
  return splits;
}

}  // namespace sessrec
