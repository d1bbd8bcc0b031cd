#include "sessrec/session.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <unordered_set>

namespace sessrec {

std::size_t SessionLog::events() const {
  std::size_t n = 0;
  for (const Session& s : sessions) n += s.size();
  return n;
}

SessionLog make_session_log(std::vector<Session> sessions) {
  std::unordered_set<SessionId> seen;
  seen.reserve(sessions.size());
  for (const Session& s : sessions) {
    if (s.items.empty()) {
      throw DataError("session " + std::to_string(s.id) + " is empty");
    }
    if (s.items.size() != s.times.size()) {
      throw DataError("session " + std::to_string(s.id) +
                      " has mismatched item/timestamp counts");
    }
    if (!std::is_sorted(s.times.begin(), s.times.end())) {
      throw DataError("session " + std::to_string(s.id) + " has decreasing timestamps");
    }
    if (!seen.insert(s.id).second) {
      throw DataError("duplicate session id " + std::to_string(s.id));
    }
  }

  std::stable_sort(sessions.begin(), sessions.end(), [](const Session& a, const Session& b) {
    return std::tuple(a.user, a.start_time(), a.id) < std::tuple(b.user, b.start_time(), b.id);
  });

  SessionLog log;
  log.sessions = std::move(sessions);
  for (std::size_t i = 0; i < log.sessions.size(); ++i) {
    log.by_user[log.sessions[i].user].push_back(i);
  }
  return log;
}

}  // namespace sessrec
