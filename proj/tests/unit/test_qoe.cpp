#include <doctest.h>

#include "../support/fixtures.hpp"
#include "qoeslice/common/errors.hpp"
#include "qoeslice/common/rng.hpp"
#include "qoeslice/qoe/qoe_model.hpp"

using namespace qoeslice;
using namespace qoeslice::env;
using namespace qoeslice::qoe;
using qoeslice::testing::action;
using qoeslice::testing::request;
using qoeslice::testing::set_nodes;

TEST_SUITE("qoe") {

TEST_CASE("econ_cost") {
  const SlicingEnv env{EnvConfig{}};
  auto s = env.reset(1);
  set_nodes(s, {{10, 2}, {15, 3}, {12, 2}, {11, 4}, {13, 3}, {14, 2}, {10, 2}, {15, 3}});
  CHECK(econ_cost(action(PlacementMode::CloudOffload, {6, 7}), s, env.config()) == 15.0);
  CHECK(econ_cost(action(PlacementMode::HorizontalLocal, {0, 1}), s, env.config()) == 35.0);
  s.nodes[6].deployed = true;
  s.nodes[7].deployed = true;
  CHECK(econ_cost(action(PlacementMode::CloudOffload, {6, 7}), s, env.config()) == 10.0);
}

TEST_CASE("reliability_cost counts shared nodes of the slice") {
  const SlicingEnv env{EnvConfig{}};
  auto s = env.reset(2);
  s = env.apply(s, request(1, QoEClassId::BestEffort, 3, 3, 2), action(PlacementMode::CloudOffload, {6, 7})).state;
  CHECK(reliability_cost(s, SliceId{1}) == 0);
  s = env.apply(s, request(2, QoEClassId::BestEffort, 3, 3, 2), action(PlacementMode::CloudOffload, {7, 8})).state;
  CHECK(reliability_cost(s, SliceId{2}) == 1);
  CHECK(reliability_cost(s, SliceId{1}) == 1);
  CHECK_THROWS_AS(reliability_cost(s, SliceId{9}), NotFoundError);

  // Three slices stacked on node 9: each counts that node once.
  auto t = env.reset(2);
  t = env.apply(t, request(1, QoEClassId::BestEffort, 3, 3, 2), action(PlacementMode::CloudOffload, {9, 6})).state;
  t = env.apply(t, request(2, QoEClassId::BestEffort, 3, 3, 2), action(PlacementMode::CloudOffload, {9, 7})).state;
  t = env.apply(t, request(3, QoEClassId::BestEffort, 3, 3, 2), action(PlacementMode::CloudOffload, {9, 8})).state;
  for (std::uint64_t id = 1; id <= 3; ++id) CHECK(reliability_cost(t, SliceId{id}) == 1);
}

TEST_CASE("weighted_cost") {
  const EnvConfig cfg;
  CHECK(weighted_cost(make_metrics(75, 0, 0, 2, cfg), {1, 0, 0}) == doctest::Approx(0.5));
  CHECK(weighted_cost(make_metrics(75, 20, 1, 2, cfg), PreferenceVector::equal()) == doctest::Approx(0.5));
  CHECK(weighted_cost(make_metrics(75, 20, 0, 2, cfg), {0, 0, 1}) == doctest::Approx(0.5));
  CHECK(weighted_cost(make_metrics(75, 20, 0, 2, cfg), {0, 1, 0}) == 0.0);
  CHECK_THROWS_AS(weighted_cost(make_metrics(1, 1, 0, 2, cfg), {0.5, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(weighted_cost(make_metrics(1, 1, 0, 2, cfg), {-0.5, 1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("weighted_cost properties") {
  const EnvConfig cfg;
  Rng rng(5);
  auto random_prefs = [&] {
    const double a = rng.uniform01(), b = rng.uniform01(), c = rng.uniform01();
    const double s = a + b + c;
    return PreferenceVector{a / s, b / s, c / s};
  };
  auto random_metrics = [&] {
    return make_metrics(rng.uniform01() * 150, rng.uniform01() * 40, static_cast<double>(rng.uniform_int(0, 3)), 3, cfg);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_prefs();
    std::vector<QoEMetrics> candidates;
    for (int i = 0; i < 6; ++i) candidates.push_back(random_metrics());
    auto argmin = [&](double scale) {
      std::size_t best = 0;
      double best_j = 1e300;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        QoEMetrics m = candidates[i];
        m.norm_latency *= scale;
        m.norm_cost *= scale;
        m.norm_reliability *= scale;
        const double j = weighted_cost(m, p);
        if (j < best_j) {
          best_j = j;
          best = i;
        }
      }
      return best;
    };
    CHECK(argmin(1.0) == argmin(3.7));

    // Monotonicity in each metric with positive weight.
    QoEMetrics m = candidates[0];
    QoEMetrics worse = m;
    worse.norm_latency += 0.1;
    CHECK(weighted_cost(worse, p) >= weighted_cost(m, p));
    worse = m;
    worse.norm_cost += 0.1;
    CHECK(weighted_cost(worse, p) >= weighted_cost(m, p));

    // Corner recovery: latency-only preferences order by latency.
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      const bool by_latency = candidates[i].latency_ms < candidates[0].latency_ms;
      const bool by_cost = weighted_cost(candidates[i], {1, 0, 0}) < weighted_cost(candidates[0], {1, 0, 0});
      CHECK(by_latency == by_cost);
    }
  }
}

TEST_CASE("check_constraints") {
  const SlicingEnv env{EnvConfig{}};
  const auto& cfg = env.config();
  auto s = env.reset(3);
  set_nodes(s, {{10, 2}, {15, 3}, {12, 2}, {11, 4}, {13, 3}, {14, 2}, {10, 2}, {15, 3}});

  SUBCASE("high priority over 30 ms") {
    const auto out = env.apply(s, request(1, QoEClassId::HighPriority, 2, 2, 2), action(PlacementMode::HorizontalLocal, {0, 1}));
    CHECK(out.outcome.latency_ms == 55.0);
    CHECK(out.outcome.has(Violation::Latency));
  }
  SUBCASE("best effort within all bounds") {
    const auto m = make_metrics(55, 15, 0, 2, cfg);
    auto st = env.apply(s, request(1, QoEClassId::BestEffort, 3, 3, 2), action(PlacementMode::CloudOffload, {6, 7})).state;
    CHECK(check_constraints(m, st, SliceId{1}, cfg).empty());
  }
  SUBCASE("cost-sensitive slice at 35 units") {
    const auto out = env.apply(s, request(1, QoEClassId::MediumPriority, 3, 3, 2), action(PlacementMode::HorizontalLocal, {0, 1}));
    CHECK(out.outcome.econ_cost == 35.0);
    CHECK(out.outcome.has(Violation::Economics));
    CHECK_FALSE(out.outcome.has(Violation::Latency));
  }
  SUBCASE("sharing beyond the class bound") {
    auto st = env.apply(s, request(1, QoEClassId::HighPriority, 2, 2, 2), action(PlacementMode::CloudOffload, {6, 7})).state;
    st = env.apply(st, request(2, QoEClassId::BestEffort, 3, 3, 2), action(PlacementMode::CloudOffload, {6, 8})).state;
    const auto m = metrics_of(st.active_slices.at(SliceId{1}).outcome, cfg);
    const auto v = check_constraints(m, st, SliceId{1}, cfg);
    CHECK(std::find(v.begin(), v.end(), Violation::Reliability) != v.end());
    CHECK_FALSE(sharing_within_bound(st, SliceId{1}, cfg));
    CHECK(sharing_within_bound(st, SliceId{2}, cfg));
    const auto audited = audit_reliability(st, cfg);
    CHECK(audited[0].has(Violation::Reliability));
    CHECK_FALSE(audited[1].has(Violation::Reliability));
  }
}

TEST_CASE("availability_ratio") {
  CHECK(availability_ratio({}) == 1.0);
  std::vector<DeploymentOutcome> v(4);
  v[3].add(Violation::Latency);
  CHECK(availability_ratio(v) == 0.75);
  std::vector<DeploymentOutcome> w(20);
  for (int i = 0; i < 4; ++i) w[static_cast<std::size_t>(i)].add(Violation::Economics);
  CHECK(availability_ratio(w) == doctest::Approx(0.8));
  w.push_back({});
  CHECK(availability_ratio(w) >= 0.8);
}

TEST_CASE("reward") {
  const EnvConfig cfg;
  const auto m = make_metrics(75, 0, 0, 2, cfg);
  const std::vector<Violation> none;
  const std::vector<Violation> one{Violation::Latency};
  CHECK(reward(m, {1, 0, 0}, none) == doctest::Approx(-0.5));
  CHECK(reward(m, {1, 0, 0}, one) == doctest::Approx(-1.5));

  const SlicingEnv env{cfg};
  for (auto cls : kAllClasses) {
    const auto o = env.infeasible_outcome(request(1, cls, 3, 3, 2));
    for (const auto& p : {PreferenceVector{1, 0, 0}, PreferenceVector{0, 1, 0}, PreferenceVector{0, 0, 1},
                          PreferenceVector::equal()}) {
      CHECK(reward(metrics_of(o, cfg), p, o.violations) < -1.0);
    }
  }
}

}  // TEST_SUITE
