#include "sessrec/event_log.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>

namespace sessrec {

namespace {

// Raw row before id remapping.
struct RawEvent {
  std::int64_t user = 0;
  std::int64_t item = 0;
  Timestamp time = 0;
};

std::vector<std::string_view> split_fields(std::string_view line, char delimiter,
                                           std::vector<std::string_view>& out) {
  out.clear();
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = line.find(delimiter, begin);
    if (end == std::string_view::npos) {
      out.push_back(line.substr(begin));
      break;
    }
    out.push_back(line.substr(begin, end - begin));
    begin = end + 1;
  }
  return out;
}

bool parse_int(std::string_view field, std::int64_t& out) {
  if (field.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const std::string text(field);
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (errno != 0 || end != text.c_str() + text.size()) return false;
  out = v;
  return true;
}

// Timestamps may be written with a fractional part; anything else integral.
bool parse_time(std::string_view field, std::int64_t& out) {
  if (parse_int(field, out)) return true;
  if (field.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const std::string text(field);
  const double v = std::strtod(text.c_str(), &end);
  if (errno != 0 || end != text.c_str() + text.size() || !std::isfinite(v)) return false;
  out = static_cast<std::int64_t>(std::floor(v));
  return true;
}

void sort_canonical(std::vector<RawEvent>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const RawEvent& a, const RawEvent& b) {
    return std::tie(a.user, a.time, a.item) < std::tie(b.user, b.time, b.item);
  });
}

EventLog index_rows(std::vector<RawEvent> rows, std::string source) {
  sort_canonical(rows);
  EventLog log;
  log.source = std::move(source);
  log.events.reserve(rows.size());
  for (const RawEvent& row : rows) {
    log.events.push_back(Event{log.users.intern(row.user), log.items.intern(row.item), row.time});
  }
  return log;
}

}  // namespace

std::int64_t IdIndexer::intern(std::int64_t external) {
  const auto [it, inserted] =
      to_dense_.try_emplace(external, static_cast<std::int64_t>(to_external_.size()));
  if (inserted) to_external_.push_back(external);
  return it->second;
}

std::optional<std::int64_t> IdIndexer::find(std::int64_t external) const {
  const auto it = to_dense_.find(external);
  if (it == to_dense_.end()) return std::nullopt;
  return it->second;
}

std::int64_t IdIndexer::external(std::int64_t dense) const {
  if (dense < 0 || static_cast<std::size_t>(dense) >= to_external_.size()) {
    throw DataError("unknown dense id " + std::to_string(dense));
  }
  return to_external_[static_cast<std::size_t>(dense)];
}

EventLog load_events(const std::filesystem::path& file, const ColumnFormat& format,
                     LoadReport* report) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open event file: " + file.string());

  std::string line;
  if (!std::getline(in, line)) throw DataError("event file is empty: " + file.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string_view> fields;
  split_fields(line, format.delimiter, fields);

  const auto column_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (fields[i] == name) return i;
    }
    throw ConfigError("column '" + name + "' not found in header of " + file.string());
  };
  const std::size_t user_col = column_of(format.user_column);
  const std::size_t item_col = column_of(format.item_column);
  const std::size_t time_col = column_of(format.time_column);
  const bool filter_actions = !format.action_column.empty();
  const std::size_t action_col = filter_actions ? column_of(format.action_column) : 0;

  LoadReport stats;
  std::vector<RawEvent> rows;
  std::size_t line_number = 1;

  const auto malformed = [&](const std::string& what) {
    ++stats.rows_malformed;
    if (stats.rows_malformed > format.max_malformed) {
      throw DataError(file.string() + ":" + std::to_string(line_number) + ": " + what +
                      " (" + std::to_string(stats.rows_malformed) + " malformed rows, " +
                      std::to_string(format.max_malformed) + " tolerated)");
    }
  };

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++stats.rows_read;
    split_fields(line, format.delimiter, fields);

    const std::size_t needed =
        std::max({user_col, item_col, time_col, filter_actions ? action_col : std::size_t{0}});
    if (fields.size() <= needed) {
      malformed("too few columns");
      continue;
    }
    if (filter_actions && fields[action_col] != format.keep_action) {
      ++stats.rows_filtered;
      continue;
    }
    RawEvent row;
    if (!parse_int(fields[user_col], row.user)) {
      malformed("bad user id '" + std::string(fields[user_col]) + "'");
      continue;
    }
    if (!parse_int(fields[item_col], row.item)) {
      malformed("bad item id '" + std::string(fields[item_col]) + "'");
      continue;
    }
    if (!parse_time(fields[time_col], row.time)) {
      malformed("bad timestamp '" + std::string(fields[time_col]) + "'");
      continue;
    }
    if (format.time_unit == ColumnFormat::TimeUnit::milliseconds) {
      // Floor division keeps negative millisecond stamps consistent.
      row.time = row.time >= 0 ? row.time / 1000 : (row.time - 999) / 1000;
    }
    rows.push_back(row);
    ++stats.rows_kept;
  }

  if (rows.empty()) throw DataError("no usable events in " + file.string());
  if (report != nullptr) *report = stats;
  return index_rows(std::move(rows), file.string());
}

EventLog make_event_log(std::vector<Event> raw, std::string source) {
  std::vector<RawEvent> rows;
  rows.reserve(raw.size());
  for (const Event& e : raw) rows.push_back(RawEvent{e.user, e.item, e.time});
  return index_rows(std::move(rows), std::move(source));
}

void save_events(const EventLog& log, const std::filesystem::path& file,
                 const ColumnFormat& format) {
  std::ofstream out(file);
  if (!out) throw DataError("cannot write event file: " + file.string());
  const char d = format.delimiter;
  out << format.user_column << d << format.item_column << d << format.time_column << '\n';
  for (const Event& e : log.events) {
    Timestamp t = e.time;
    if (format.time_unit == ColumnFormat::TimeUnit::milliseconds) t *= 1000;
    out << log.users.external(e.user) << d << log.items.external(e.item) << d << t << '\n';
  }
  if (!out) throw DataError("failed writing " + file.string());
}

void save_id_map(const IdIndexer& index, const std::filesystem::path& file,
                 const std::string& kind) {
  std::ofstream out(file);
  if (!out) throw DataError("cannot write id map: " + file.string());
  out << kind << "_dense," << kind << "_external\n";
  for (std::size_t dense = 0; dense < index.size(); ++dense) {
    out << dense << ',' << index.external(static_cast<std::int64_t>(dense)) << '\n';
  }
  if (!out) throw DataError("failed writing " + file.string());
}

IdIndexer load_id_map(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open id map: " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("id map is empty: " + file.string());
  IdIndexer index;
  std::size_t line_number = 1;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    split_fields(line, ',', fields);
    std::int64_t dense = 0;
    std::int64_t external = 0;
    if (fields.size() != 2 || !parse_int(fields[0], dense) || !parse_int(fields[1], external)) {
      throw DataError(file.string() + ":" + std::to_string(line_number) + ": bad id map row");
    }
    if (index.intern(external) != dense) {
      throw DataError(file.string() + ":" + std::to_string(line_number) +
                      ": dense ids must be contiguous and ascending");
    }
  }
  return index;
}

LogStats log_stats(const EventLog& log) {
  LogStats stats;
  stats.events = log.events.size();
  stats.users = log.users.size();
  stats.items = log.items.size();
  if (!log.events.empty()) {
    Timestamp lo = log.events.front().time;
    Timestamp hi = lo;
    for (const Event& e : log.events) {
      lo = std::min(lo, e.time);
      hi = std::max(hi, e.time);
    }
    stats.time_span = hi - lo;
  }
  return stats;
}

}  // namespace sessrec
