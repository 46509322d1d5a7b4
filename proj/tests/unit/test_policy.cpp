#include <doctest.h>

#include <limits>

#include "../support/fixtures.hpp"
#include "qoeslice/common/rng.hpp"
#include "qoeslice/env/request_generator.hpp"
#include "qoeslice/policy/baselines.hpp"
#include "qoeslice/policy/brute_force.hpp"
#include "qoeslice/qoe/qoe_model.hpp"

using namespace qoeslice;
using namespace qoeslice::env;
using namespace qoeslice::policy;
using qoeslice::testing::action;
using qoeslice::testing::request;
using qoeslice::testing::set_nodes;

namespace {

EnvConfig small_config() {
  EnvConfig cfg;
  cfg.pool_size = 6;
  cfg.chain_length_range = {2, 2};
  for (auto& c : cfg.classes) c.chain_length = {2, 2};
  return cfg;
}

// Independent reference: enumerate every sequence over feasible actions plus
// declining, with a plain recursive lambda and costs from replay_episode.
double reference_optimum(const SlicingEnv& env, const NetworkState& initial, const std::vector<SliceRequest>& reqs,
                         const std::vector<qoe::PreferenceVector>& prefs) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<DeploymentAction> seq;
  std::function<void(const NetworkState&)> rec = [&](const NetworkState& s) {
    if (seq.size() == reqs.size()) {
      best = std::min(best, replay_episode(env, initial, reqs, prefs, seq).total_cost);
      return;
    }
    auto acts = env.feasible_actions(s, reqs[seq.size()]);
    acts.push_back(DeploymentAction::infeasible());
    for (const auto& a : acts) {
      const auto next = env.apply(s, reqs[seq.size()], a).state;
      seq.push_back(a);
      rec(next);
      seq.pop_back();
    }
  };
  rec(initial);
  return best;
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("local_first") {
  const SlicingEnv env{EnvConfig{}};
  auto s = env.reset(1);
  const auto r = request(1, QoEClassId::BestEffort, 4, 4, 2);

  SUBCASE("fresh state goes horizontal") {
    CHECK(local_first(env, s, r).mode == PlacementMode::HorizontalLocal);
  }
  SUBCASE("prefers vertical into an existing container") {
    s = env.apply(s, request(7, QoEClassId::BestEffort, 3, 3, 2), local_first(env, s, request(7, QoEClassId::BestEffort, 3, 3, 2))).state;
    const auto a = local_first(env, s, r);
    CHECK(a.mode == PlacementMode::VerticalLocal);
    CHECK(a.target_container == s.containers[0].container_id);
  }
  SUBCASE("no local cpu means cloud") {
    s.local_cpu_free = 0;
    CHECK(local_first(env, s, r).mode == PlacementMode::CloudOffload);
  }
  SUBCASE("lowest delay, ties to the lower id") {
    set_nodes(s, {{12, 2}, {10, 2}, {13, 2}, {10, 2}, {15, 2}, {11, 2}});
    CHECK(local_first(env, s, r).node_ids == std::vector<int>{1, 3});
  }
  SUBCASE("deployed nodes count as zero delay") {
    set_nodes(s, {{12, 2}, {10, 2}, {13, 2}, {10, 2}, {15, 2}, {11, 2}});
    s.nodes[4].deployed = true;
    CHECK(local_first(env, s, r).node_ids == std::vector<int>{4, 1});
  }
  SUBCASE("pure") { CHECK(local_first(env, s, r) == local_first(env, s, r)); }
}

TEST_CASE("cloud_only") {
  const SlicingEnv env{EnvConfig{}};
  auto s = env.reset(2);
  set_nodes(s, {{10, 2}, {10, 2}, {10, 2}, {10, 2}, {10, 2}, {10, 2}, {10, 4}, {10, 3}, {10, 2}, {10, 4}, {10, 2}, {10, 3}});

  SUBCASE("cheapest cloud nodes on a fresh state") {
    const auto a = cloud_only(env, s, request(1, QoEClassId::BestEffort, 3, 3, 2));
    CHECK(a.mode == PlacementMode::CloudOffload);
    CHECK(a.node_ids == std::vector<int>{8, 10});
  }
  SUBCASE("high priority with every cloud node occupied") {
    for (auto& n : s.nodes) {
      if (n.host == Host::Cloud) {
        n.deployed = true;
        n.tenants.push_back(SliceId{99});
      }
    }
    CHECK(cloud_only(env, s, request(1, QoEClassId::HighPriority, 2, 2, 2)).is_infeasible());
  }
  SUBCASE("second identical best-effort request reuses the nodes") {
    const auto r1 = request(1, QoEClassId::BestEffort, 3, 3, 2);
    const auto r2 = request(2, QoEClassId::BestEffort, 3, 3, 2);
    const auto a1 = cloud_only(env, s, r1);
    const auto step = env.apply(s, r1, a1);
    const auto a2 = cloud_only(env, step.state, r2);
    CHECK(a2.node_ids == a1.node_ids);
    CHECK(env.apply(step.state, r2, a2).outcome.econ_cost == 10.0);
  }
}

TEST_CASE("run_episode audits reliability on the final topology") {
  const SlicingEnv env{EnvConfig{}};
  const auto s = env.reset(3);
  const std::vector<SliceRequest> reqs{request(1, QoEClassId::MediumPriority, 3, 3, 2),
                                       request(2, QoEClassId::BestEffort, 3, 3, 2),
                                       request(3, QoEClassId::BestEffort, 3, 3, 2)};
  const std::vector<qoe::PreferenceVector> prefs(3, qoe::PreferenceVector::equal());
  const std::vector<DeploymentAction> acts{action(PlacementMode::CloudOffload, {6, 7}),
                                           action(PlacementMode::CloudOffload, {6, 8}),
                                           action(PlacementMode::CloudOffload, {6, 9})};
  const auto result = replay_episode(env, s, reqs, prefs, acts);
  CHECK(result.outcomes[0].has(Violation::Reliability));
  CHECK(result.outcomes[1].served());
  CHECK(result.outcomes[2].served());
  CHECK(qoe::availability_ratio(result.outcomes) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("brute force oracle") {
  const SlicingEnv env{small_config()};

  SUBCASE("guard") {
    const SlicingEnv big{EnvConfig{}};
    const auto s = big.reset(1);
    const std::vector<SliceRequest> one{request(1, QoEClassId::BestEffort, 3, 3, 2)};
    const std::vector<qoe::PreferenceVector> p(1, qoe::PreferenceVector::equal());
    CHECK_THROWS_AS(brute_force_optimal(big, s, one, p), std::invalid_argument);
    const auto t = env.reset(1);
    std::vector<SliceRequest> four;
    for (std::uint64_t i = 1; i <= 4; ++i) four.push_back(request(i, QoEClassId::BestEffort, 3, 3, 2));
    CHECK_THROWS_AS(brute_force_optimal(env, t, four, std::vector<qoe::PreferenceVector>(4)), std::invalid_argument);
  }

  SUBCASE("latency-only preferences pick the minimal latency action") {
    const auto s = env.reset(4);
    const std::vector<SliceRequest> reqs{request(1, QoEClassId::BestEffort, 3, 3, 2)};
    const std::vector<qoe::PreferenceVector> prefs{{1, 0, 0}};
    const auto best = brute_force_optimal(env, s, reqs, prefs);
    double min_latency = 1e9;
    for (const auto& a : env.feasible_actions(s, reqs[0])) {
      min_latency = std::min(min_latency, qoe::latency_ms(a, s, env.config()));
    }
    CHECK(qoe::latency_ms(best.actions[0], s, env.config()) == min_latency);
  }

  SUBCASE("economics-only preferences offload") {
    const auto s = env.reset(5);
    const std::vector<SliceRequest> reqs{request(1, QoEClassId::BestEffort, 3, 3, 2)};
    const auto best = brute_force_optimal(env, s, reqs, std::vector<qoe::PreferenceVector>{{0, 0, 1}});
    CHECK(best.actions[0].mode == PlacementMode::CloudOffload);
  }

  SUBCASE("second economics-only request shares the first's nodes") {
    const auto s = env.reset(6);
    const std::vector<SliceRequest> reqs{request(1, QoEClassId::BestEffort, 3, 3, 2),
                                         request(2, QoEClassId::BestEffort, 3, 3, 2)};
    const auto best = brute_force_optimal(env, s, reqs, std::vector<qoe::PreferenceVector>(2, {0, 0, 1}));
    auto a = best.actions[0].node_ids;
    auto b = best.actions[1].node_ids;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }

  SUBCASE("matches an independent enumeration and dominates every heuristic") {
    Rng rng(99);
    for (int inst = 0; inst < 120; ++inst) {
      const auto n = static_cast<int>(rng.uniform_int(1, 3));
      const auto reqs = generate_requests(n, rng.next_u64(), ClassMix{}, env.config());
      std::vector<qoe::PreferenceVector> prefs;
      for (int i = 0; i < n; ++i) {
        const double a = rng.uniform01(), b = rng.uniform01(), c = rng.uniform01();
        prefs.push_back({a / (a + b + c), b / (a + b + c), c / (a + b + c)});
      }
      const auto s = env.reset(rng.next_u64());
      const auto best = brute_force_optimal(env, s, reqs, prefs);
      CHECK(best.total_cost == doctest::Approx(reference_optimum(env, s, reqs, prefs)).epsilon(1e-12));
      CHECK(replay_episode(env, s, reqs, prefs, best.actions).total_cost == doctest::Approx(best.total_cost));

      const auto lf = run_episode(env, s, reqs, prefs, [&](const NetworkState& st, const SliceRequest& r, const qoe::PreferenceVector&) {
        return local_first(env, st, r);
      });
      const auto co = run_episode(env, s, reqs, prefs, [&](const NetworkState& st, const SliceRequest& r, const qoe::PreferenceVector&) {
        return cloud_only(env, st, r);
      });
      CHECK(best.total_cost <= lf.total_cost + 1e-12);
      CHECK(best.total_cost <= co.total_cost + 1e-12);
    }
  }

  SUBCASE("deterministic") {
    const auto s = env.reset(7);
    const auto reqs = generate_requests(3, 8, ClassMix{}, env.config());
    const std::vector<qoe::PreferenceVector> prefs(3, qoe::PreferenceVector::equal());
    const auto a = brute_force_optimal(env, s, reqs, prefs);
    const auto b = brute_force_optimal(env, s, reqs, prefs);
    CHECK(a.actions == b.actions);
    CHECK(a.total_cost == b.total_cost);
  }
}

}  // TEST_SUITE
