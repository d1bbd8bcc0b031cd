// Microbenchmarks for fit and single-prediction latency of every method.

#include <benchmark/benchmark.h>

#include <vector>

#include "sessrec/neighborhood.hpp"
#include "sessrec/rng.hpp"
#include "sessrec/session.hpp"
#include "sessrec/sr.hpp"

namespace {

using namespace sessrec;

// A skewed training log of roughly `target_events` events.
SessionLog bench_log(std::int64_t target_events) {
  Rng rng(1234);
  std::vector<Session> sessions;
  std::int64_t events = 0;
  SessionId id = 0;
  const int items = 10'000;
  while (events < target_events) {
    Session s;
    s.id = ++id;
    s.user = 1 + static_cast<UserId>(rng.bounded(2'000));
    Timestamp t = 1'600'000'000 + static_cast<Timestamp>(rng.bounded(60LL * 86'400));
    const int length = 3 + static_cast<int>(rng.bounded(8));
    for (int e = 0; e < length; ++e) {
      const std::uint64_t u = rng.bounded(items);
      s.items.push_back(1 + static_cast<ItemId>(u * u / items));
      s.times.push_back(t);
      t += 30 + static_cast<Timestamp>(rng.bounded(120));
    }
    events += length;
    sessions.push_back(std::move(s));
  }
  return make_session_log(std::move(sessions));
}

const SessionLog& shared_log() {
  static const SessionLog log = bench_log(100'000);
  return log;
}

PredictionContext context_from(const SessionLog& log, std::size_t index) {
  const Session& s = log.sessions[index % log.size()];
  Session current = s;
  if (current.size() > 1) {
    current.items.pop_back();
    current.times.pop_back();
  }
  const Timestamp now = current.times.front();
  return {std::move(current), {}, now};
}

void bench_fit_sr(benchmark::State& state) {
  const SessionLog& train = shared_log();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_sr(train, SrConfig{}));
  }
}
BENCHMARK(bench_fit_sr)->Unit(benchmark::kMillisecond);

void bench_fit_vsknn(benchmark::State& state) {
  const SessionLog& train = shared_log();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_vsknn(train, VsknnConfig{}));
  }
}
BENCHMARK(bench_fit_vsknn)->Unit(benchmark::kMillisecond);

void bench_fit_stan(benchmark::State& state) {
  const SessionLog& train = shared_log();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_stan(train, StanConfig{}));
  }
}
BENCHMARK(bench_fit_stan)->Unit(benchmark::kMillisecond);

void bench_predict_sr(benchmark::State& state) {
  const SessionLog& train = shared_log();
  const auto model = fit_sr(train, SrConfig{});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model->predict(context_from(train, i++)));
  }
}
BENCHMARK(bench_predict_sr)->Unit(benchmark::kMicrosecond);

void bench_predict_vsknn(benchmark::State& state) {
  const SessionLog& train = shared_log();
  const auto model = fit_vsknn(train, VsknnConfig{});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model->predict(context_from(train, i++)));
  }
}
BENCHMARK(bench_predict_vsknn)->Unit(benchmark::kMicrosecond);

void bench_predict_stan(benchmark::State& state) {
  const SessionLog& train = shared_log();
  const auto model = fit_stan(train, StanConfig{});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model->predict(context_from(train, i++)));
  }
}
BENCHMARK(bench_predict_stan)->Unit(benchmark::kMicrosecond);

void bench_predict_vstan(benchmark::State& state) {
  const SessionLog& train = shared_log();
  const auto model = fit_vstan(train, VstanConfig{});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model->predict(context_from(train, i++)));
  }
}
BENCHMARK(bench_predict_vstan)->Unit(benchmark::kMicrosecond);

// Pool capping is the lever that keeps prediction latency flat as the log
// grows; sweep it to show the effect.
void bench_predict_vsknn_sample(benchmark::State& state) {
  const SessionLog& train = shared_log();
  VsknnConfig config;
  config.sample_size = static_cast<int>(state.range(0));
  const auto model = fit_vsknn(train, config);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model->predict(context_from(train, i++)));
  }
}
BENCHMARK(bench_predict_vsknn_sample)->Arg(100)->Arg(500)->Arg(1000)->Arg(5000)
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
