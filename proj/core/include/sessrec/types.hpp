#pragma once

#include <cstdint>
#include <stdexcept>

namespace sessrec {

using UserId = std::int64_t;
using ItemId = std::int64_t;
using SessionId = std::int64_t;
using Timestamp = std::int64_t;  // seconds since epoch

// One user/item interaction.
struct Event {
  UserId user = 0;
  ItemId item = 0;
  Timestamp time = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

// A bad setting supplied by the caller: unknown names, out-of-range values,
// unusable files. The command line maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data that violates a documented precondition (malformed rows,
// sessions too short to evaluate, and so on). Also exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sessrec
