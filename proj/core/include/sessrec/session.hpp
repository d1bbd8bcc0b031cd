#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "sessrec/types.hpp"

namespace sessrec {

// A contiguous burst of one user's activity. Items are in event order and may
// repeat; timestamps are non-decreasing and parallel to items.
struct Session {
  SessionId id = 0;
  UserId user = 0;
  std::vector<ItemId> items;
  std::vector<Timestamp> times;

  Timestamp start_time() const { return times.empty() ? 0 : times.front(); }
  std::size_t size() const { return items.size(); }

  friend bool operator==(const Session&, const Session&) = default;
};

// Sessions in canonical order (user, start time, id) plus a per-user index of
// positions into `sessions`, start-ascending.
struct SessionLog {
  std::vector<Session> sessions;
  std::map<UserId, std::vector<std::size_t>> by_user;

  std::size_t size() const { return sessions.size(); }
  std::size_t users() const { return by_user.size(); }
  std::size_t events() const;

  friend bool operator==(const SessionLog& a, const SessionLog& b) {
    return a.sessions == b.sessions;
  }
};

// Sorts, validates and indexes sessions. Throws DataError on malformed input:
// empty sessions, item/timestamp length mismatch, decreasing timestamps or
// duplicate session ids.
SessionLog make_session_log(std::vector<Session> sessions);

}  // namespace sessrec
