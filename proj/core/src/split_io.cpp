#include "sessrec/split_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

namespace sessrec {

namespace {

using nlohmann::json;

constexpr const char* kRoles[] = {"train", "validation", "test"};

std::filesystem::path slice_dir(const std::filesystem::path& dir, int index) {
  return dir / ("slice_" + std::to_string(index));
}

void write_role(const SessionLog& log, const std::filesystem::path& file,
                const IdIndexer& users, const IdIndexer& items) {
  std::ofstream out(file);
  if (!out) throw DataError("cannot write split file: " + file.string());
  out << "session_id,user_id,item_id,timestamp\n";
  for (const Session& s : log.sessions) {
    for (std::size_t i = 0; i < s.items.size(); ++i) {
      out << s.id << ',' << users.external(s.user) << ',' << items.external(s.items[i]) << ','
          << s.times[i] << '\n';
    }
  }
  if (!out) throw DataError("failed writing " + file.string());
}

json role_counts(const SessionLog& log) {
  std::set<ItemId> items;
  for (const Session& s : log.sessions) items.insert(s.items.begin(), s.items.end());
  return json{{"events", log.events()},
              {"sessions", log.size()},
              {"users", log.users()},
              {"items", items.size()}};
}

SessionLog read_role(const std::filesystem::path& file, const IdIndexer& users,
                     const IdIndexer& items) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open split file: " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("split file is empty: " + file.string());

  // Rows of one session are contiguous; collect in file order.
  std::vector<Session> sessions;
  std::map<SessionId, std::size_t> position;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    SessionId sid = 0;
    std::int64_t user = 0;
    std::int64_t item = 0;
    long long time = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream row(line);
    if (!(row >> sid >> c1 >> user >> c2 >> item >> c3 >> time) || c1 != ',' || c2 != ',' ||
        c3 != ',') {
      throw DataError(file.string() + ":" + std::to_string(line_number) + ": bad split row");
    }
    const auto dense_user = users.find(user);
    const auto dense_item = items.find(item);
    if (!dense_user || !dense_item) {
      throw DataError(file.string() + ":" + std::to_string(line_number) +
                      ": identifier missing from the persisted id maps");
    }
    auto [it, inserted] = position.try_emplace(sid, sessions.size());
    if (inserted) {
      Session s;
      s.id = sid;
      s.user = *dense_user;
      sessions.push_back(std::move(s));
    }
    Session& s = sessions[it->second];
    s.items.push_back(*dense_item);
    s.times.push_back(time);
  }
  return make_session_log(std::move(sessions));
}

}  // namespace

void save_splits(const std::vector<SliceSplit>& splits, const std::filesystem::path& dir,
                 const IdIndexer& users, const IdIndexer& items,
                 const PreprocessConfig& config, std::uint64_t seed,
                 const std::string& dataset_name, const TimeWindows& windows) {
  std::filesystem::create_directories(dir);
  save_id_map(users, dir / "users.csv", "user");
  save_id_map(items, dir / "items.csv", "item");

  json slices = json::array();
  for (const SliceSplit& split : splits) {
    const std::filesystem::path sdir = slice_dir(dir, split.slice_index);
    std::filesystem::create_directories(sdir);
    write_role(split.train, sdir / "train.csv", users, items);
    write_role(split.validation, sdir / "validation.csv", users, items);
    write_role(split.test, sdir / "test.csv", users, items);

    const auto [lo, hi] = windows.bounds(split.slice_index);
    slices.push_back(json{{"index", split.slice_index},
                          {"window", {lo, hi}},
                          {"train", role_counts(split.train)},
                          {"validation", role_counts(split.validation)},
                          {"test", role_counts(split.test)}});
  }

  json manifest{
      {"dataset", dataset_name},
      {"seed", seed},
      {"num_slices", static_cast<int>(splits.size())},
      {"config",
       {{"inactivity_gap", config.inactivity_gap},
        {"min_item_support", config.min_item_support},
        {"min_session_length", config.min_session_length},
        {"max_session_length",
         config.max_session_length ? json(*config.max_session_length) : json()},
        {"min_user_sessions", config.min_user_sessions},
        {"num_slices", config.num_slices},
        {"skip_head", config.skip_head},
        {"user_sample", config.user_sample}}},
      {"notes",
       {"duplicate interaction rows are kept",
        "validation sessions are held out, never merged back into train"}},
      {"slices", slices}};

  std::ofstream out(dir / "manifest.json");
  if (!out) throw DataError("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
  if (!out) throw DataError("failed writing manifest in " + dir.string());
}

SliceSplit load_split(const std::filesystem::path& dir, int slice_index) {
  const IdIndexer users = load_id_map(dir / "users.csv");
  const IdIndexer items = load_id_map(dir / "items.csv");
  const std::filesystem::path sdir = slice_dir(dir, slice_index);

  SliceSplit split;
  split.slice_index = slice_index;
  split.train = read_role(sdir / "train.csv", users, items);
  split.validation = read_role(sdir / "validation.csv", users, items);
  split.test = read_role(sdir / "test.csv", users, items);
  for (const Session& s : split.train.sessions) {
    split.item_vocabulary.insert(s.items.begin(), s.items.end());
  }
  return split;
}

std::vector<SliceSplit> load_splits(const std::filesystem::path& dir) {
  const ManifestInfo info = read_manifest(dir);
  std::vector<SliceSplit> splits;
  splits.reserve(static_cast<std::size_t>(info.num_slices));
  for (int i = 0; i < info.num_slices; ++i) splits.push_back(load_split(dir, i));
  return splits;
}

ManifestInfo read_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw DataError("no manifest.json in " + dir.string() + "; run preprocess first");
  json manifest;
  try {
    in >> manifest;
    ManifestInfo info;
    info.dataset = manifest.at("dataset").get<std::string>();
    info.num_slices = manifest.at("num_slices").get<int>();
    info.seed = manifest.at("seed").get<std::uint64_t>();
    return info;
  } catch (const json::exception& e) {
    throw DataError("malformed manifest in " + dir.string() + ": " + e.what());
  }
}

}  // namespace sessrec
