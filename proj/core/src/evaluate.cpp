#include "sessrec/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "json.hpp"

namespace sessrec {

namespace {

using nlohmann::json;

// Everything one evaluation session contributes, kept separate so sessions
// can be processed on any thread and folded in session order afterwards.
struct CutoffPartial {
  double hit = 0.0;
  double mrr = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double map = 0.0;
  double popularity = 0.0;
  std::int64_t slots = 0;
  std::unordered_set<ItemId> covered;
};

struct SessionPartial {
  std::vector<CutoffPartial> at;
  std::int64_t events = 0;
};

std::vector<int> normalized_cutoffs(const MetricConfig& config) {
  if (config.cutoffs.empty()) throw ConfigError("at least one metric cutoff is required");
  std::vector<int> cutoffs = config.cutoffs;
  for (const int k : cutoffs) {
    if (k < 1) throw ConfigError("metric cutoffs must be >= 1");
  }
  std::sort(cutoffs.begin(), cutoffs.end());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  return cutoffs;
}

// The user's training sessions that started strictly before `now`.
std::vector<const Session*> history_before(const SessionLog& train, UserId user, Timestamp now) {
  std::vector<const Session*> history;
  const auto it = train.by_user.find(user);
  if (it == train.by_user.end()) return history;
  for (const std::size_t index : it->second) {
    const Session& s = train.sessions[index];
    if (s.start_time() < now) history.push_back(&s);
  }
  return history;
}

SessionPartial evaluate_session(const Model& model, const ExtensionStack& stack,
                                const SessionLog& train, const Session& session,
                                const std::vector<int>& cutoffs, const PopularityTable& pop) {
  SessionPartial partial;
  partial.at.resize(cutoffs.size());
  const std::size_t length = session.items.size();
  if (length < 2) return partial;

  const Timestamp now = session.start_time();
  const std::vector<const Session*> history = history_before(train, session.user, now);

  // Distinct items of the unrevealed suffix, maintained incrementally.
  std::unordered_map<ItemId, int> suffix_count;
  std::unordered_set<ItemId> remaining;
  for (std::size_t i = 1; i < length; ++i) {
    ++suffix_count[session.items[i]];
    remaining.insert(session.items[i]);
  }

  Session revealed;
  revealed.id = session.id;
  revealed.user = session.user;

  for (std::size_t t = 1; t < length; ++t) {
    revealed.items.push_back(session.items[t - 1]);
    revealed.times.push_back(session.times[t - 1]);

    PredictionContext ctx{revealed, history, now};
    const ScoredList list = predict_with_extensions(model, ctx, stack);
    const ItemId next = session.items[t];

    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      const int k = cutoffs[c];
      CutoffPartial& out = partial.at[c];
      out.hit += hit_at_k(list, next, k);
      out.mrr += mrr_at_k(list, next, k);
      const RankedSetMetrics set_metrics = ranked_set_metrics(list, remaining, k);
      out.precision += set_metrics.precision;
      out.recall += set_metrics.recall;
      out.map += set_metrics.average_precision;
      const std::size_t limit = std::min(list.size(), static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < limit; ++i) {
        out.popularity += pop.normalized(list.entries[i].item);
        out.covered.insert(list.entries[i].item);
      }
      out.slots += static_cast<std::int64_t>(limit);
    }
    ++partial.events;

    // Reveal consumed one suffix event; keep the distinct set in step.
    if (--suffix_count[next] == 0) {
      suffix_count.erase(next);
      remaining.erase(next);
    }
  }
  return partial;
}

}  // namespace

MetricReport run_protocol(const Model& model, const ExtensionStack& stack,
                          const SliceSplit& split, EvalRole role, const MetricConfig& config,
                          int threads) {
  const std::vector<int> cutoffs = normalized_cutoffs(config);
  const SessionLog& eval_log = role == EvalRole::validation ? split.validation : split.test;
  if (split.item_vocabulary.empty()) throw DataError("training vocabulary is empty");
  const PopularityTable pop(split.train);

  const std::size_t n = eval_log.sessions.size();
  std::vector<SessionPartial> partials(n);

  const int workers = std::max(1, threads);
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      partials[i] =
          evaluate_session(model, stack, split.train, eval_log.sessions[i], cutoffs, pop);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          partials[i] =
              evaluate_session(model, stack, split.train, eval_log.sessions[i], cutoffs, pop);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    const std::size_t spawn = std::min(static_cast<std::size_t>(workers), n);
    pool.reserve(spawn);
    for (std::size_t i = 0; i < spawn; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Folded in session order, so the arithmetic matches a sequential run.
  std::int64_t events = 0;
  std::vector<CutoffPartial> totals(cutoffs.size());
  for (const SessionPartial& partial : partials) {
    events += partial.events;
    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      const CutoffPartial& p = partial.at[c];
      CutoffPartial& t = totals[c];
      t.hit += p.hit;
      t.mrr += p.mrr;
      t.precision += p.precision;
      t.recall += p.recall;
      t.map += p.map;
      t.popularity += p.popularity;
      t.slots += p.slots;
      t.covered.insert(p.covered.begin(), p.covered.end());
    }
  }
  if (events == 0) throw DataError("evaluation produced no prediction events");

  MetricReport report;
  report.prediction_events = events;
  report.eval_sessions = static_cast<std::int64_t>(n);
  const double denom = static_cast<double>(events);
  const double vocab = static_cast<double>(split.item_vocabulary.size());
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    const CutoffPartial& t = totals[c];
    CutoffMetrics m;
    m.hit_rate = t.hit / denom;
    m.mrr = t.mrr / denom;
    m.precision = t.precision / denom;
    m.recall = t.recall / denom;
    m.map = t.map / denom;
    m.coverage = static_cast<double>(t.covered.size()) / vocab;
    m.popularity = t.slots > 0 ? t.popularity / static_cast<double>(t.slots) : 0.0;
    report.at[cutoffs[c]] = m;
  }
  return report;
}

MetricReport measure_times(const std::function<std::unique_ptr<Model>()>& fit,
                           const ExtensionStack& stack, const SliceSplit& split, EvalRole role,
                           const MetricConfig& config) {
  using clock = std::chrono::steady_clock;
  const auto fit_start = clock::now();
  const std::unique_ptr<Model> model = fit();
  const auto fit_end = clock::now();

  const auto eval_start = clock::now();
  MetricReport report = run_protocol(*model, stack, split, role, config, 1);
  const auto eval_end = clock::now();

  report.training_time_s = std::chrono::duration<double>(fit_end - fit_start).count();
  const double eval_ms = std::chrono::duration<double, std::milli>(eval_end - eval_start).count();
  report.mean_prediction_time_ms = eval_ms / static_cast<double>(report.prediction_events);
  return report;
}

std::string report_to_json(const MetricReport& report) {
  json metrics = json::object();
  for (const auto& [cutoff, m] : report.at) {
    metrics[std::to_string(cutoff)] = {
        {"hit_rate", m.hit_rate},   {"mrr", m.mrr},
        {"precision", m.precision}, {"recall", m.recall},
        {"map", m.map},             {"coverage", m.coverage},
        {"popularity", m.popularity}};
  }
  const json doc = {{"metrics", std::move(metrics)},
                    {"timing",
                     {{"training_time_s", report.training_time_s},
                      {"mean_prediction_time_ms", report.mean_prediction_time_ms}}},
                    {"counts",
                     {{"prediction_events", report.prediction_events},
                      {"eval_sessions", report.eval_sessions}}}};
  return doc.dump(2) + "\n";
}

MetricReport report_from_json(const std::string& json_text) {
  try {
    const json doc = json::parse(json_text);
    MetricReport report;
    for (const auto& [key, value] : doc.at("metrics").items()) {
      CutoffMetrics m;
      m.hit_rate = value.at("hit_rate").get<double>();
      m.mrr = value.at("mrr").get<double>();
      m.precision = value.at("precision").get<double>();
      m.recall = value.at("recall").get<double>();
      m.map = value.at("map").get<double>();
      m.coverage = value.at("coverage").get<double>();
      m.popularity = value.at("popularity").get<double>();
      report.at[std::stoi(key)] = m;
    }
    report.training_time_s = doc.at("timing").at("training_time_s").get<double>();
    report.mean_prediction_time_ms =
        doc.at("timing").at("mean_prediction_time_ms").get<double>();
    report.prediction_events = doc.at("counts").at("prediction_events").get<std::int64_t>();
    report.eval_sessions = doc.at("counts").at("eval_sessions").get<std::int64_t>();
    return report;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report document: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw DataError("malformed report document: non-numeric cutoff key");
  }
}

std::string report_csv_header() {
  return "algorithm,slice,cutoff,hit_rate,mrr,precision,recall,map,coverage,popularity,"
         "training_time_s,mean_prediction_time_ms,prediction_events,eval_sessions\n";
}

void append_report_csv(std::string& out, const std::string& algorithm, int slice,
                       const MetricReport& report) {
  char buffer[512];
  for (const auto& [cutoff, m] : report.at) {
    std::snprintf(buffer, sizeof(buffer),
                  "%s,%d,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.6f,%.6f,%lld,%lld\n",
                  algorithm.c_str(), slice, cutoff, m.hit_rate, m.mrr, m.precision, m.recall,
                  m.map, m.coverage, m.popularity, report.training_time_s,
                  report.mean_prediction_time_ms,
                  static_cast<long long>(report.prediction_events),
                  static_cast<long long>(report.eval_sessions));
    out += buffer;
  }
}

}  // namespace sessrec
