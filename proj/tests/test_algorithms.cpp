#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "sessrec/model_io.hpp"
#include "sessrec/neighborhood.hpp"
#include "sessrec/rng.hpp"
#include "sessrec/sr.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "support/temp.hpp"

using namespace sessrec;
using testsupport::make_test_session;

namespace {

double score_of(const ScoredList& list, ItemId item) {
  for (const ScoredEntry& e : list.entries) {
    if (e.item == item) return e.score;
  }
  return -1.0;
}

PredictionContext context_of(std::vector<ItemId> items, Timestamp now) {
  PredictionContext ctx;
  ctx.current = make_test_session(1'000'000, 1'000'000, std::move(items), now);
  ctx.now = now;
  return ctx;
}

// Train log of the small worked examples: s1=[1,2], s2=[1,3], s3=[2,3].
SessionLog triangle_log() {
  return make_session_log({
      make_test_session(1, 1, {1, 2}, 100),
      make_test_session(2, 2, {1, 3}, 200),
      make_test_session(3, 3, {2, 3}, 300),
  });
}

}  // namespace

TEST_CASE("pair rules accumulate distance-decayed weights") {
  const SessionLog train = make_session_log({make_test_session(1, 1, {1, 2, 3}, 100)});
  SrConfig config;
  config.steps = 2;
  config.weighting = Weighting::div;
  const auto model = fit_sr(train, config);

  // From [1,2,3]: 1->2 at distance 1, 2->3 at distance 1, 1->3 at distance 2.
  const ScoredList from_one = model->predict(context_of({1}, 1000));
  REQUIRE(from_one.size() == 2);
  CHECK(from_one.entries[0] == ScoredEntry{2, 1.0});
  CHECK(from_one.entries[1] == ScoredEntry{3, 0.5});
  const ScoredList from_two = model->predict(context_of({2}, 1000));
  REQUIRE(from_two.size() == 1);
  CHECK(from_two.entries[0] == ScoredEntry{3, 1.0});
}

TEST_CASE("repeated pairs add up") {
  const SessionLog train = make_session_log({
      make_test_session(1, 1, {1, 2}, 100),
      make_test_session(2, 2, {1, 2}, 200),
  });
  const auto model = fit_sr(train, SrConfig{});
  const ScoredList list = model->predict(context_of({1}, 1000));
  REQUIRE(list.size() == 1);
  CHECK(list.entries[0] == ScoredEntry{2, 2.0});
}

TEST_CASE("only the last context item selects the rule") {
  const auto model = fit_sr(make_session_log({make_test_session(1, 1, {1, 2, 3}, 100)}),
                            SrConfig{});
  CHECK(model->predict(context_of({3, 1}, 1000)).size() == 2);   // acts like [1]
  CHECK(model->predict(context_of({1, 99}, 1000)).empty());      // unseen last item
  CHECK(model->predict(context_of({}, 1000)).empty());
  CHECK(!model->session_weight(context_of({1}, 1000), make_test_session(9, 9, {1}, 50))
             .has_value());
}

TEST_CASE("rule-method configuration is validated") {
  const SessionLog train = make_session_log({make_test_session(1, 1, {1, 2}, 100)});
  CHECK_THROWS_AS(fit_sr(train, SrConfig{0, Weighting::div}), ConfigError);
  CHECK_THROWS_AS(fit_sr(train, SrConfig{10, Weighting::same}), ConfigError);
  CHECK_THROWS_AS(fit_sr(make_session_log({}), SrConfig{}), DataError);
}

TEST_CASE("pairs whose scheme weighs them to zero never enter the ranking") {
  // Distance 10 under linear weighting is worth exactly zero.
  std::vector<ItemId> items{1};
  for (int i = 0; i < 10; ++i) items.push_back(50 + i);
  const SessionLog train = make_session_log({make_test_session(1, 1, items, 100)});
  SrConfig config;
  config.steps = 15;
  config.weighting = Weighting::linear;
  const ScoredList list = fit_sr(train, config)->predict(context_of({1}, 1000));
  CHECK(score_of(list, 59) == -1.0);  // the item 10 steps away
  CHECK(score_of(list, 58) == doctest::Approx(0.1));
}

TEST_CASE("session overlap scores follow the binary-cosine worked example") {
  VsknnConfig config;
  config.k = 2;
  config.sample_size = 1000;
  config.weighting = Weighting::same;
  config.idf_weighting = 0;
  const auto model = fit_vsknn(triangle_log(), config);
  const PredictionContext ctx = context_of({1}, 1000);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(*model->session_weight(ctx, triangle_log().sessions[0]) ==
        doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(*model->session_weight(ctx, triangle_log().sessions[2]) == 0.0);

  const ScoredList list = model->predict(ctx);
  CHECK(score_of(list, 2) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(score_of(list, 3) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("the candidate pool is the indexed union, capped to the most recent") {
  const auto model = fit_vsknn(triangle_log(), VsknnConfig{});
  SUBCASE("union of sessions holding a context item") {
    const auto pool = model->neighbor_pool(context_of({1}, 1000), 10);
    REQUIRE(pool.size() == 2);
    CHECK(pool[0]->id == 1);
    CHECK(pool[1]->id == 2);
  }
  SUBCASE("no indexed item, empty pool") {
    CHECK(model->neighbor_pool(context_of({99}, 1000), 10).empty());
  }
  SUBCASE("cap keeps the most recently started sessions") {
    std::vector<Session> sessions;
    for (int i = 0; i < 5; ++i) {
      sessions.push_back(make_test_session(i + 1, i + 1, {7, static_cast<ItemId>(20 + i)},
                                           100 * (i + 1)));
    }
    const auto capped = fit_vsknn(make_session_log(std::move(sessions)), VsknnConfig{});
    const auto pool = capped->neighbor_pool(context_of({7}, 1000), 3);
    REQUIRE(pool.size() == 3);
    CHECK(pool[0]->id == 3);
    CHECK(pool[1]->id == 4);
    CHECK(pool[2]->id == 5);
  }
}

TEST_CASE("with huge decay constants the time-aware method degenerates to overlap") {
  const SessionLog train = make_session_log({
      make_test_session(1, 1, {1, 2}, 100),
      make_test_session(2, 2, {1, 3}, 200),
  });
  StanConfig config;
  config.lambda_spw = 1e9;
  config.lambda_snh = 1e9;
  config.lambda_inh = 1e9;
  const ScoredList list = fit_stan(train, config)->predict(context_of({1}, 1000));

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(score_of(list, 2) == doctest::Approx(inv_sqrt2).epsilon(1e-6));
  CHECK(score_of(list, 3) == doctest::Approx(inv_sqrt2).epsilon(1e-6));
  CHECK(score_of(list, 1) == doctest::Approx(2.0 * inv_sqrt2).epsilon(1e-6));
}

TEST_CASE("neighborhood configuration is validated") {
  const SessionLog train = triangle_log();
  VsknnConfig bad_k;
  bad_k.k = 0;
  CHECK_THROWS_AS(fit_vsknn(train, bad_k), ConfigError);
  VsknnConfig bad_sample;
  bad_sample.sample_size = 0;
  CHECK_THROWS_AS(fit_vsknn(train, bad_sample), ConfigError);
  StanConfig bad_decay;
  bad_decay.lambda_snh = 0.0;
  CHECK_THROWS_AS(fit_stan(train, bad_decay), ConfigError);
  VstanConfig bad_ipw;
  bad_ipw.lambda_ipw = -1.0;
  CHECK_THROWS_AS(fit_vstan(train, bad_ipw), ConfigError);
  CHECK_THROWS_AS(fit_vstan(make_session_log({}), VstanConfig{}), DataError);
}

TEST_CASE("predictions are deterministic and never mutate the model") {
  Rng rng(11);
  const SessionLog train = testsupport::random_session_log(rng);
  const auto a = fit_vstan(train, VstanConfig{});
  const auto b = fit_vstan(train, VstanConfig{});
  const std::string payload_before = a->save_payload();
  for (int round = 0; round < 20; ++round) {
    const auto fixture = testsupport::random_context(rng, train);
    CHECK(a->predict(fixture.ctx()) == b->predict(fixture.ctx()));
  }
  CHECK(a->save_payload() == payload_before);
}

TEST_CASE("a sample cap at least as large as the pool changes nothing") {
  Rng rng(17);
  const SessionLog train = testsupport::random_session_log(rng);
  VsknnConfig wide;
  wide.sample_size = 100'000;
  VsknnConfig exact;
  exact.sample_size = static_cast<int>(train.sessions.size());
  const auto a = fit_vsknn(train, wide);
  const auto b = fit_vsknn(train, exact);
  for (int round = 0; round < 20; ++round) {
    const auto fixture = testsupport::random_context(rng, train);
    CHECK(a->predict(fixture.ctx()) == b->predict(fixture.ctx()));
  }
}

TEST_CASE("models survive a save/load round trip") {
  Rng rng(23);
  const SessionLog train = testsupport::random_session_log(rng);
  testsupport::TempDir dir;

  const auto check_round_trip = [&](const Model& model, const char* name) {
    const auto file = dir.path() / (std::string(name) + ".json");
    save_model(model, file);
    const auto loaded = load_model(file);
    CHECK(loaded->method() == model.method());
    for (int round = 0; round < 10; ++round) {
      const auto fixture = testsupport::random_context(rng, train);
      CHECK(loaded->predict(fixture.ctx()) == model.predict(fixture.ctx()));
    }
  };
  check_round_trip(*fit_sr(train, SrConfig{}), "sr");
  check_round_trip(*fit_vsknn(train, VsknnConfig{}), "vsknn");
  check_round_trip(*fit_stan(train, StanConfig{}), "stan");
  check_round_trip(*fit_vstan(train, VstanConfig{}), "vstan");
}

TEST_CASE("predictions match the naive full-scan implementations bit for bit") {
  Rng rng(31);
  for (int round = 0; round < 40; ++round) {
    const SessionLog train = testsupport::random_session_log(rng);
    const SrConfig sr_config{3 + static_cast<int>(rng.bounded(8)), Weighting::div};
    const auto sr = fit_sr(train, sr_config);
    VsknnConfig vsknn_config;
    vsknn_config.k = 1 + static_cast<int>(rng.bounded(20));
    vsknn_config.sample_size = 1 + static_cast<int>(rng.bounded(30));
    const auto vsknn = fit_vsknn(train, vsknn_config);
    StanConfig stan_config;
    stan_config.k = 1 + static_cast<int>(rng.bounded(20));
    const auto stan = fit_stan(train, stan_config);
    VstanConfig vstan_config;
    vstan_config.lambda_idf = static_cast<int>(rng.bounded(3));
    vstan_config.similarity = rng.bounded(2) == 0 ? Similarity::cosine : Similarity::vec;
    const auto vstan = fit_vstan(train, vstan_config);

    const auto fixture = testsupport::random_context(rng, train);
    const PredictionContext ctx = fixture.ctx();
    CHECK(sr->predict(ctx) == testsupport::oracle_sr(train, ctx.current, sr_config));
    CHECK(vsknn->predict(ctx) == testsupport::oracle_vsknn(train, ctx, vsknn_config));
    CHECK(stan->predict(ctx) == testsupport::oracle_stan(train, ctx, stan_config));
    CHECK(vstan->predict(ctx) == testsupport::oracle_vstan(train, ctx, vstan_config));
  }
}
