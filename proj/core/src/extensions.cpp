#include "sessrec/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace sessrec {

namespace {

// History pointers ordered oldest to newest so "most recent" is well defined
// even if the caller passed them in arbitrary order.
std::vector<const Session*> chronological(const std::vector<const Session*>& history) {
  std::vector<const Session*> sorted = history;
  std::sort(sorted.begin(), sorted.end(), [](const Session* a, const Session* b) {
    return std::tuple(a->start_time(), a->id) < std::tuple(b->start_time(), b->id);
  });
  return sorted;
}

std::vector<const Session*> last_sessions(const std::vector<const Session*>& history, int count) {
  std::vector<const Session*> sorted = chronological(history);
  if (sorted.size() > static_cast<std::size_t>(count)) {
    sorted.erase(sorted.begin(), sorted.end() - count);
  }
  return sorted;
}

// Latest interaction time of `item` in `sessions` that lies strictly before
// `now`; nullopt when there is none.
std::optional<Timestamp> latest_before(const std::vector<const Session*>& sessions, ItemId item,
                                       Timestamp now) {
  std::optional<Timestamp> latest;
  for (const Session* s : sessions) {
    for (std::size_t i = 0; i < s->items.size(); ++i) {
      if (s->items[i] != item) continue;
      if (s->times[i] >= now) continue;
      if (!latest || s->times[i] > *latest) latest = s->times[i];
    }
  }
  return latest;
}

// (x - min) / (max - min) over the raw values; a spread of zero maps all to 0.
void min_max_scale(std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double spread = *hi - *lo;
  if (spread <= 0.0) {
    std::fill(values.begin(), values.end(), 0.0);
    return;
  }
  const double low = *lo;
  for (double& v : values) v = (v - low) / spread;
}

}  // namespace

PredictionContext extend_session(const PredictionContext& ctx, const ExtendConfig& config) {
  if (config.desired_length < 1) throw ConfigError("extend desired_length must be >= 1");
  const std::size_t have = ctx.current.items.size();
  if (have >= static_cast<std::size_t>(config.desired_length) || ctx.history.empty()) {
    return ctx;
  }

  std::vector<ItemId> flat_items;
  std::vector<Timestamp> flat_times;
  for (const Session* s : chronological(ctx.history)) {
    flat_items.insert(flat_items.end(), s->items.begin(), s->items.end());
    flat_times.insert(flat_times.end(), s->times.begin(), s->times.end());
  }
  const std::size_t needed =
      std::min(flat_items.size(), static_cast<std::size_t>(config.desired_length) - have);

  PredictionContext extended = ctx;
  extended.current.items.assign(flat_items.end() - needed, flat_items.end());
  extended.current.times.assign(flat_times.end() - needed, flat_times.end());
  extended.current.items.insert(extended.current.items.end(), ctx.current.items.begin(),
                                ctx.current.items.end());
  extended.current.times.insert(extended.current.times.end(), ctx.current.times.begin(),
                                ctx.current.times.end());
  return extended;
}

ScoredList boost_scores(const ScoredList& base, const PredictionContext& ctx,
                        const BoostConfig& config) {
  if (config.factor < 0.0 || !std::isfinite(config.factor)) {
    throw ConfigError("boost factor must be finite and >= 0");
  }
  std::unordered_set<ItemId> known;
  for (const Session* s : ctx.history) known.insert(s->items.begin(), s->items.end());

  std::vector<ScoredEntry> entries = base.entries;
  for (ScoredEntry& e : entries) {
    if (known.count(e.item) != 0) e.score *= 1.0 + config.factor;
  }
  return make_scored(std::move(entries));
}

double irec_score(const PredictionContext& ctx, ItemId item, int past_sessions) {
  if (past_sessions < 1) throw ConfigError("past_sessions must be >= 1");
  const auto recent = last_sessions(ctx.history, past_sessions);
  const auto latest = latest_before(recent, item, ctx.now);
  if (!latest) {
    throw DataError("item has no interaction before the prediction time in the recent sessions");
  }
  return static_cast<double>(ctx.now) / static_cast<double>(ctx.now - *latest);
}

double ssim_score(ItemId item,
                  const std::vector<std::pair<const Session*, double>>& recent_sims) {
  double sum = 0.0;
  for (const auto& [session, sim] : recent_sims) {
    if (std::find(session->items.begin(), session->items.end(), item) != session->items.end()) {
      sum += sim;
    }
  }
  return sum;
}

ScoredList remind_combine(const ScoredList& base, const PredictionContext& ctx,
                          const RemindConfig& config,
                          const std::vector<std::pair<const Session*, double>>* recent_sims) {
  if (config.past_sessions < 1) throw ConfigError("past_sessions must be >= 1");
  if (config.weight_rel < 0 || config.weight_irec < 0 || config.weight_ssim < 0) {
    throw ConfigError("reminder weights must be >= 0");
  }
  const int w_ssim = recent_sims == nullptr ? 0 : config.weight_ssim;
  if (config.weight_rel + config.weight_irec + w_ssim == 0) {
    throw ConfigError("at least one reminder weight must be positive");
  }

  std::vector<const Session*> recent;
  if (recent_sims != nullptr) {
    for (const auto& [session, sim] : *recent_sims) recent.push_back(session);
  } else {
    recent = last_sessions(ctx.history, config.past_sessions);
  }

  // Candidates: base-scored items first, then unseen recent items in first
  // appearance order. The ordering only seeds iteration; ranking is by score.
  std::vector<ItemId> candidates;
  std::unordered_set<ItemId> listed;
  for (const ScoredEntry& e : base.entries) {
    if (listed.insert(e.item).second) candidates.push_back(e.item);
  }
  for (const Session* s : recent) {
    for (const ItemId item : s->items) {
      if (listed.insert(item).second) candidates.push_back(item);
    }
  }
  if (candidates.empty()) return {};

  std::unordered_map<ItemId, double> base_score;
  for (const ScoredEntry& e : base.entries) base_score.emplace(e.item, e.score);

  const std::size_t n = candidates.size();
  std::vector<double> rel(n, 0.0), irec(n, 0.0), ssim(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const ItemId item = candidates[i];
    if (const auto it = base_score.find(item); it != base_score.end()) rel[i] = it->second;
    if (config.weight_irec > 0) {
      if (const auto latest = latest_before(recent, item, ctx.now)) {
        irec[i] = static_cast<double>(ctx.now) / static_cast<double>(ctx.now - *latest);
      }
    }
    if (w_ssim > 0) ssim[i] = ssim_score(item, *recent_sims);
  }
  min_max_scale(rel);
  min_max_scale(irec);
  min_max_scale(ssim);

  std::vector<ScoredEntry> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double overall = config.weight_rel * rel[i] + config.weight_irec * irec[i] +
                           w_ssim * ssim[i];
    entries.push_back({candidates[i], overall});
  }
  return make_scored(std::move(entries));
}

ScoredList predict_with_extensions(const Model& model, const PredictionContext& ctx,
                                   const ExtensionStack& stack) {
  const PredictionContext extended =
      stack.extend ? extend_session(ctx, *stack.extend) : ctx;

  ScoredList scores = model.predict(extended);
  if (stack.boost) scores = boost_scores(scores, extended, *stack.boost);

  if (stack.remind) {
    const auto recent = last_sessions(extended.history, stack.remind->past_sessions);
    std::vector<std::pair<const Session*, double>> sims;
    // A model without a session-similarity notion gets the similarity
    // component disabled rather than a made-up signal.
    bool lacks_similarity = false;
    for (const Session* s : recent) {
      const auto weight = model.session_weight(extended, *s);
      if (!weight) {
        lacks_similarity = true;
        break;
      }
      sims.push_back({s, *weight});
    }
    scores = remind_combine(scores, extended, *stack.remind, lacks_similarity ? nullptr : &sims);
  }
  return scores;
}

}  // namespace sessrec
