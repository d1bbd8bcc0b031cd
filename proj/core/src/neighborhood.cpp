#include "sessrec/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <unordered_set>

#include "json.hpp"

namespace sessrec {

namespace {

using nlohmann::json;

constexpr double kSecondsPerDay = 86400.0;

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

void validate_common(int k, int sample_size) {
  require(k >= 1, "neighbor count k must be >= 1");
  require(sample_size >= 1, "sample_size must be >= 1");
}

}  // namespace

Similarity parse_similarity(const std::string& name) {
  if (name == "cosine") return Similarity::cosine;
  if (name == "vec") return Similarity::vec;
  throw ConfigError("unknown similarity '" + name + "'");
}

std::string similarity_name(Similarity s) {
  return s == Similarity::cosine ? "cosine" : "vec";
}

// Digest of the ongoing session: one weight per position, aggregated per
// distinct item in first-occurrence order. Keeping the aggregation order
// fixed keeps floating-point sums reproducible.
struct NeighborhoodModel::ContextView {
  std::vector<std::pair<ItemId, double>> aggregated;  // distinct item -> summed weight
  std::unordered_set<ItemId> items;
  double norm = 0.0;  // sqrt(sum of squared position weights)
};

NeighborhoodModel::NeighborhoodModel(const SessionLog& train, AnyConfig config)
    : config_(std::move(config)) {
  if (const auto* c = std::get_if<VsknnConfig>(&config_)) {
    validate_common(c->k, c->sample_size);
    require(c->idf_weighting >= 0, "idf_weighting must be >= 0");
    scoring_.k = c->k;
    scoring_.sample_size = c->sample_size;
    scoring_.weighting = c->weighting;
    scoring_.normalize = true;
    scoring_.weighting_score = c->weighting_score;
    scoring_.idf_strength = c->idf_weighting;
  } else if (const auto* c = std::get_if<StanConfig>(&config_)) {
    validate_common(c->k, c->sample_size);
    require(c->lambda_spw > 0 && c->lambda_snh > 0 && c->lambda_inh > 0,
            "stan decay constants must be positive");
    scoring_.k = c->k;
    scoring_.sample_size = c->sample_size;
    scoring_.exp_positions = true;
    scoring_.lambda_spw = c->lambda_spw;
    scoring_.normalize = true;
    scoring_.lambda_snh = c->lambda_snh;
    scoring_.lambda_inh = c->lambda_inh;
  } else {
    const auto& v = std::get<VstanConfig>(config_);
    validate_common(v.k, v.sample_size);
    require(v.lambda_spw > 0 && v.lambda_snh > 0 && v.lambda_inh > 0 && v.lambda_ipw > 0,
            "vstan decay constants must be positive");
    require(v.lambda_idf >= 0, "lambda_idf must be >= 0");
    scoring_.k = v.k;
    scoring_.sample_size = v.sample_size;
    scoring_.exp_positions = true;
    scoring_.lambda_spw = v.lambda_spw;
    scoring_.normalize = v.similarity == Similarity::cosine;
    scoring_.lambda_snh = v.lambda_snh;
    scoring_.lambda_inh = v.lambda_inh;
    scoring_.lambda_ipw = v.lambda_ipw;
    scoring_.idf_bonus = v.lambda_idf;
  }
  build(train);
}

void NeighborhoodModel::build(const SessionLog& train) {
  if (train.sessions.empty()) {
    throw DataError("cannot fit a neighborhood model on an empty session log");
  }

  store_.reserve(train.sessions.size());
  for (const Session& s : train.sessions) {
    Stored stored;
    stored.session = s;
    store_.push_back(std::move(stored));
  }
  // Oldest first; ties on start time resolved by id so recency is total.
  std::sort(store_.begin(), store_.end(), [](const Stored& a, const Stored& b) {
    return std::tuple(a.session.start_time(), a.session.id) <
           std::tuple(b.session.start_time(), b.session.id);
  });

  for (std::size_t row = 0; row < store_.size(); ++row) {
    Stored& stored = store_[row];
    std::unordered_map<ItemId, std::size_t> slot;
    for (std::size_t p = 0; p < stored.session.items.size(); ++p) {
      const ItemId item = stored.session.items[p];
      const auto [it, inserted] = slot.try_emplace(item, stored.last_position.size());
      if (inserted) {
        stored.last_position.push_back({item, static_cast<int>(p + 1)});
        postings_[item].push_back(static_cast<std::uint32_t>(row));
      } else {
        stored.last_position[it->second].second = static_cast<int>(p + 1);
      }
    }
    stored.distinct = static_cast<int>(stored.last_position.size());
  }

  const double total = static_cast<double>(store_.size());
  bool first = true;
  for (const auto& [item, rows] : postings_) {
    const double value = std::log(total / static_cast<double>(rows.size()));
    idf_[item] = value;
    if (first || value < idf_min_) idf_min_ = value;
    if (first || value > idf_max_) idf_max_ = value;
    first = false;
  }
}

std::string_view NeighborhoodModel::method() const {
  switch (config_.index()) {
    case 0:
      return "vsknn";
    case 1:
      return "stan";
    default:
      return "vstan";
  }
}

double NeighborhoodModel::idf(ItemId item) const {
  const auto it = idf_.find(item);
  return it == idf_.end() ? 0.0 : it->second;
}

NeighborhoodModel::ContextView NeighborhoodModel::view_of(const Session& current) const {
  ContextView view;
  const int len = static_cast<int>(current.items.size());
  double sum_sq = 0.0;
  std::unordered_map<ItemId, std::size_t> slot;
  for (int p = 1; p <= len; ++p) {
    const double w = scoring_.exp_positions
                         ? std::exp(static_cast<double>(p - len) / scoring_.lambda_spw)
                         : position_weight(scoring_.weighting, p, len);
    sum_sq += w * w;
    const ItemId item = current.items[static_cast<std::size_t>(p - 1)];
    const auto [it, inserted] = slot.try_emplace(item, view.aggregated.size());
    if (inserted) {
      view.aggregated.push_back({item, w});
      view.items.insert(item);
    } else {
      view.aggregated[it->second].second += w;
    }
  }
  view.norm = std::sqrt(sum_sq);
  return view;
}

double NeighborhoodModel::similarity_to(const ContextView& view, const Session& past,
                                        Timestamp now) const {
  std::unordered_set<ItemId> past_items(past.items.begin(), past.items.end());
  double num = 0.0;
  for (const auto& [item, weight] : view.aggregated) {
    if (past_items.count(item) != 0) num += weight;
  }
  if (num == 0.0) return 0.0;
  double sim = num;
  if (scoring_.normalize) {
    sim /= view.norm * std::sqrt(static_cast<double>(past_items.size()));
  }
  if (scoring_.lambda_snh) {
    const double age_days = static_cast<double>(now - past.start_time()) / kSecondsPerDay;
    sim *= std::exp(-age_days / *scoring_.lambda_snh);
  }
  return sim;
}

std::optional<double> NeighborhoodModel::session_weight(const PredictionContext& ctx,
                                                        const Session& past) const {
  if (ctx.current.items.empty() || past.items.empty()) return 0.0;
  return similarity_to(view_of(ctx.current), past, ctx.now);
}

std::vector<const Session*> NeighborhoodModel::neighbor_pool(const PredictionContext& ctx,
                                                             int sample_size) const {
  require(sample_size >= 1, "sample_size must be >= 1");
  const ContextView view = view_of(ctx.current);

  // Union of the posting rows of every distinct context item, deduplicated.
  std::vector<std::uint32_t> pool;
  std::unordered_set<std::uint32_t> seen;
  for (const auto& [item, weight] : view.aggregated) {
    const auto it = postings_.find(item);
    if (it == postings_.end()) continue;
    for (const std::uint32_t row : it->second) {
      if (seen.insert(row).second) pool.push_back(row);
    }
  }
  std::sort(pool.begin(), pool.end());
  // The store is recency-ascending, so the most recently started sessions
  // are the highest rows.
  if (pool.size() > static_cast<std::size_t>(sample_size)) {
    pool.erase(pool.begin(), pool.end() - sample_size);
  }
  std::vector<const Session*> result;
  result.reserve(pool.size());
  for (const std::uint32_t row : pool) result.push_back(&store_[row].session);
  return result;
}

ScoredList NeighborhoodModel::predict(const PredictionContext& ctx) const {
  if (ctx.current.items.empty()) return {};
  const ContextView view = view_of(ctx.current);

  // Candidate pool: sessions sharing any context item, recency-sampled.
  std::vector<std::uint32_t> pool;
  {
    std::unordered_set<std::uint32_t> seen;
    for (const auto& [item, weight] : view.aggregated) {
      const auto it = postings_.find(item);
      if (it == postings_.end()) continue;
      for (const std::uint32_t row : it->second) {
        if (seen.insert(row).second) pool.push_back(row);
      }
    }
  }
  if (pool.empty()) return {};
  std::sort(pool.begin(), pool.end());
  if (pool.size() > static_cast<std::size_t>(scoring_.sample_size)) {
    pool.erase(pool.begin(), pool.end() - scoring_.sample_size);
  }

  // Similarity numerators, accumulated item by item in aggregation order so
  // the summation order never depends on data structure internals.
  std::vector<double> num(pool.size(), 0.0);
  {
    std::unordered_map<std::uint32_t, std::uint32_t> position;
    position.reserve(pool.size() * 2);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      position.emplace(pool[i], static_cast<std::uint32_t>(i));
    }
    for (const auto& [item, weight] : view.aggregated) {
      const auto it = postings_.find(item);
      if (it == postings_.end()) continue;
      for (const std::uint32_t row : it->second) {
        const auto pos = position.find(row);
        if (pos != position.end()) num[pos->second] += weight;
      }
    }
  }

  struct Neighbor {
    std::uint32_t row = 0;
    double sim = 0.0;
  };
  std::vector<Neighbor> neighbors;
  neighbors.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (num[i] == 0.0) continue;
    const Stored& stored = store_[pool[i]];
    double sim = num[i];
    if (scoring_.normalize) {
      sim /= view.norm * std::sqrt(static_cast<double>(stored.distinct));
    }
    if (scoring_.lambda_snh) {
      const double age_days =
          static_cast<double>(ctx.now - stored.session.start_time()) / kSecondsPerDay;
      sim *= std::exp(-age_days / *scoring_.lambda_snh);
    }
    if (sim > 0.0) neighbors.push_back({pool[i], sim});
  }
  if (neighbors.empty()) return {};

  // Highest similarity first; equal similarities prefer the more recent
  // session (higher store row) so the ranking is total.
  std::sort(neighbors.begin(), neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    return a.row > b.row;
  });
  if (neighbors.size() > static_cast<std::size_t>(scoring_.k)) {
    neighbors.resize(static_cast<std::size_t>(scoring_.k));
  }

  const double idf_spread = idf_max_ - idf_min_;
  std::unordered_map<ItemId, double> acc;
  std::vector<ItemId> order;  // first-scored order, for stable iteration
  for (const Neighbor& neighbor : neighbors) {
    const Stored& stored = store_[neighbor.row];
    const int len = static_cast<int>(stored.session.items.size());

    // Anchor: the latest position holding any item shared with the context.
    int anchor = 0;
    if (scoring_.lambda_inh) {
      for (const auto& [item, last] : stored.last_position) {
        if (view.items.count(item) != 0) anchor = std::max(anchor, last);
      }
    }

    for (const auto& [item, last] : stored.last_position) {
      double value = neighbor.sim;
      if (scoring_.weighting_score) {
        value *= position_weight(*scoring_.weighting_score, last, len);
      }
      if (scoring_.idf_strength > 0) {
        value *= 1.0 + static_cast<double>(scoring_.idf_strength) * idf(item);
      }
      if (scoring_.lambda_inh) {
        value *= std::exp(-std::abs(last - anchor) / *scoring_.lambda_inh);
      }
      if (scoring_.lambda_ipw) {
        value *= std::exp(static_cast<double>(last - len) / *scoring_.lambda_ipw);
      }
      if (scoring_.idf_bonus > 0 && idf_spread > 0.0) {
        value *= 1.0 + static_cast<double>(scoring_.idf_bonus) * (idf(item) - idf_min_) / idf_spread;
      }
      const auto [it, inserted] = acc.try_emplace(item, value);
      if (inserted) {
        order.push_back(item);
      } else {
        it->second += value;
      }
    }
  }

  std::vector<ScoredEntry> entries;
  entries.reserve(order.size());
  for (const ItemId item : order) {
    const double score = acc[item];
    if (score > 0.0) entries.push_back({item, score});
  }
  return make_scored(std::move(entries));
}

std::string NeighborhoodModel::save_payload() const {
  json config;
  if (const auto* c = std::get_if<VsknnConfig>(&config_)) {
    config = {{"type", "vsknn"},
              {"k", c->k},
              {"sample_size", c->sample_size},
              {"weighting", weighting_name(c->weighting)},
              {"weighting_score", weighting_name(c->weighting_score)},
              {"idf_weighting", c->idf_weighting}};
  } else if (const auto* c = std::get_if<StanConfig>(&config_)) {
    config = {{"type", "stan"},
              {"k", c->k},
              {"sample_size", c->sample_size},
              {"lambda_spw", c->lambda_spw},
              {"lambda_snh", c->lambda_snh},
              {"lambda_inh", c->lambda_inh}};
  } else {
    const auto& v = std::get<VstanConfig>(config_);
    config = {{"type", "vstan"},
              {"k", v.k},
              {"sample_size", v.sample_size},
              {"similarity", similarity_name(v.similarity)},
              {"lambda_spw", v.lambda_spw},
              {"lambda_snh", v.lambda_snh},
              {"lambda_inh", v.lambda_inh},
              {"lambda_ipw", v.lambda_ipw},
              {"lambda_idf", v.lambda_idf}};
  }
  json sessions = json::array();
  for (const Stored& stored : store_) {
    sessions.push_back(
        {stored.session.id, stored.session.user, stored.session.items, stored.session.times});
  }
  return json{{"config", std::move(config)}, {"sessions", std::move(sessions)}}.dump();
}

std::unique_ptr<NeighborhoodModel> fit_vsknn(const SessionLog& train, const VsknnConfig& config) {
  return std::make_unique<NeighborhoodModel>(train, NeighborhoodModel::AnyConfig(config));
}

std::unique_ptr<NeighborhoodModel> fit_stan(const SessionLog& train, const StanConfig& config) {
  return std::make_unique<NeighborhoodModel>(train, NeighborhoodModel::AnyConfig(config));
}

std::unique_ptr<NeighborhoodModel> fit_vstan(const SessionLog& train, const VstanConfig& config) {
  return std::make_unique<NeighborhoodModel>(train, NeighborhoodModel::AnyConfig(config));
}

std::unique_ptr<NeighborhoodModel> neighborhood_from_payload(const std::string& payload) {
  try {
    const json doc = json::parse(payload);
    const json& config = doc.at("config");
    const std::string type = config.at("type").get<std::string>();

    NeighborhoodModel::AnyConfig any;
    if (type == "vsknn") {
      VsknnConfig c;
      c.k = config.at("k").get<int>();
      c.sample_size = config.at("sample_size").get<int>();
      c.weighting = parse_weighting(config.at("weighting").get<std::string>());
      c.weighting_score = parse_weighting(config.at("weighting_score").get<std::string>());
      c.idf_weighting = config.at("idf_weighting").get<int>();
      any = c;
    } else if (type == "stan") {
      StanConfig c;
      c.k = config.at("k").get<int>();
      c.sample_size = config.at("sample_size").get<int>();
      c.lambda_spw = config.at("lambda_spw").get<double>();
      c.lambda_snh = config.at("lambda_snh").get<double>();
      c.lambda_inh = config.at("lambda_inh").get<double>();
      any = c;
    } else if (type == "vstan") {
      VstanConfig c;
      c.k = config.at("k").get<int>();
      c.sample_size = config.at("sample_size").get<int>();
      c.similarity = parse_similarity(config.at("similarity").get<std::string>());
      c.lambda_spw = config.at("lambda_spw").get<double>();
      c.lambda_snh = config.at("lambda_snh").get<double>();
      c.lambda_inh = config.at("lambda_inh").get<double>();
      c.lambda_ipw = config.at("lambda_ipw").get<double>();
      c.lambda_idf = config.at("lambda_idf").get<int>();
      any = c;
    } else {
      throw DataError("unknown neighborhood type '" + type + "'");
    }

    std::vector<Session> sessions;
    for (const json& row : doc.at("sessions")) {
      Session s;
      s.id = row.at(0).get<SessionId>();
      s.user = row.at(1).get<UserId>();
      s.items = row.at(2).get<std::vector<ItemId>>();
      s.times = row.at(3).get<std::vector<Timestamp>>();
      sessions.push_back(std::move(s));
    }
    return std::make_unique<NeighborhoodModel>(make_session_log(std::move(sessions)),
                                               std::move(any));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed neighborhood payload: ") + e.what());
  }
}

}  // namespace sessrec
