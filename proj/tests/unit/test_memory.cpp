#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "../support/fixtures.hpp"
#include "qoeslice/bench/harness.hpp"
#include "qoeslice/common/errors.hpp"
#include "qoeslice/common/rng.hpp"
#include "qoeslice/env/intent_templates.hpp"
#include "qoeslice/intent/embedder.hpp"
#include "qoeslice/intent/intent_inference.hpp"
#include "qoeslice/intent/llm_client.hpp"
#include "qoeslice/memory/memory_bank.hpp"
#include "qoeslice/memory/rag_preferences.hpp"
#include "qoeslice/policy/baselines.hpp"

using namespace qoeslice;
using namespace qoeslice::memory;
using qoeslice::testing::request;

namespace {

IntentEntry make_entry(const intent::Embedder& e, const std::string& text, qoe::PreferenceVector p,
                       std::uint64_t ts, int merges = 1) {
  IntentEntry x;
  x.intent_text = text;
  x.embedding = e.embed(text);
  x.preference = p;
  x.timestamp = ts;
  x.merge_count = merges;
  return x;
}

// Embedding at a chosen cosine to e0 in a 2-bucket subspace of a D=4 space.
intent::Embedding at_cosine(double c) { return {c, std::sqrt(1 - c * c), 0.0, 0.0}; }

std::multiset<std::string> fingerprint(const IntentStore& s) {
  std::multiset<std::string> out;
  for (const auto& e : s.entries()) {
    std::ostringstream os;
    os.precision(17);
    os << e.id << '|' << e.intent_text << '|' << e.timestamp << '|' << e.merge_count << '|' << e.preference.latency
       << ',' << e.preference.reliability << ',' << e.preference.econ;
    for (double v : e.embedding) os << ',' << v;
    if (e.outcome) {
      os << '|' << e.outcome->latency_ms << ',' << e.outcome->econ_cost << ',' << e.outcome->reliability_cost << ','
         << e.outcome->served_fraction << ',' << e.outcome->samples;
    }
    out.insert(os.str());
  }
  return out;
}

IntentStore random_store(const intent::Embedder& e, Rng& rng, std::size_t n) {
  IntentStore s;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform01(), b = rng.uniform01(), c = rng.uniform01();
    auto x = make_entry(e, "intent " + std::to_string(rng.next_u64()) + " unicode \xce\xbb \"quoted\"",
                        {a / (a + b + c), b / (a + b + c), c / (a + b + c)},
                        static_cast<std::uint64_t>(rng.uniform_int(0, 5000)), static_cast<int>(rng.uniform_int(1, 9)));
    if (rng.uniform01() < 0.5) {
      x.outcome = OutcomeSummary{rng.uniform01() * 100, rng.uniform01() * 40, rng.uniform01() * 3, rng.uniform01(),
                                 static_cast<std::size_t>(rng.uniform_int(1, 50))};
    }
    s.insert(std::move(x));
  }
  return s;
}

}  // namespace

TEST_SUITE("memory") {

TEST_CASE("log_outcome") {
  const intent::HashingEmbedder e;
  IntentStore s;
  auto first = log_outcome(s, e, "robot arm control", {0.5, 0.3, 0.2}, std::nullopt, 1);
  CHECK(s.size() == 1);
  CHECK(first.merge_count == 1);
  auto again = log_outcome(s, e, "robot arm control", {0.5, 0.3, 0.2}, std::nullopt, 2);
  CHECK(s.size() == 1);
  CHECK(again.merge_count == 2);
  CHECK(again.timestamp == 2);
  log_outcome(s, e, "bulk archive", {0.1, 0.1, 0.8}, std::nullopt, 3);
  CHECK(s.size() == 2);
  CHECK_THROWS_AS(log_outcome(s, e, "  ", {0.5, 0.3, 0.2}, std::nullopt, 4), std::invalid_argument);
  CHECK_THROWS_AS(log_outcome(s, e, "x", {0.5, 0.5, 0.5}, std::nullopt, 4), std::invalid_argument);
}

TEST_CASE("redundancy gate merge arithmetic") {
  const intent::HashingEmbedder e;
  IntentStore s;
  s.insert(make_entry(e, "video backhaul", {0.5, 0.3, 0.2}, 1));
  auto cand = make_entry(e, "video backhaul", {0.3, 0.3, 0.4}, 5);
  cand.outcome = OutcomeSummary{40, 20, 1, 1.0, 1};
  const auto r = redundancy_gate(s, cand, 0.95);
  CHECK(r.kind == GateKind::Merged);
  const auto& m = s.entries()[0];
  CHECK(m.preference.latency == doctest::Approx(0.4));
  CHECK(m.preference.reliability == doctest::Approx(0.3));
  CHECK(m.preference.econ == doctest::Approx(0.3));
  CHECK(m.merge_count == 2);
  CHECK(m.timestamp == 5);
  REQUIRE(m.outcome);
  CHECK(m.outcome->samples == 1);

  // A second merge weights the existing side by its merge count.
  redundancy_gate(s, make_entry(e, "video backhaul", {0.1, 0.3, 0.6}, 6), 0.95);
  CHECK(s.entries()[0].preference.latency == doctest::Approx((0.4 * 2 + 0.1) / 3));
  CHECK(s.entries()[0].merge_count == 3);
}

TEST_CASE("redundancy gate thresholds") {
  IntentStore s;
  IntentEntry base;
  base.intent_text = "a";
  base.embedding = at_cosine(1.0);
  base.preference = qoe::PreferenceVector::equal();
  s.insert(base);

  IntentEntry near = base;
  near.intent_text = "b";
  near.embedding = at_cosine(0.94);
  CHECK(redundancy_gate(s, near, 0.95).kind == GateKind::Inserted);
  IntentEntry exact = base;
  exact.intent_text = "c";
  exact.embedding = at_cosine(0.96);
  IntentStore t;
  t.insert(base);
  CHECK(redundancy_gate(t, exact, 0.95).kind == GateKind::Merged);
  const double n = intent::norm(t.entries()[0].embedding);
  CHECK(n == doctest::Approx(1.0).epsilon(1e-12));

  IntentStore u;
  u.insert(base);
  IntentEntry almost = base;
  almost.embedding = at_cosine(0.999999);
  CHECK(redundancy_gate(u, almost, 1.0).kind == GateKind::Inserted);
  CHECK(redundancy_gate(u, base, 1.0).kind == GateKind::Merged);
}

TEST_CASE("merged entries stay normalised") {
  const intent::HashingEmbedder e;
  Rng rng(2);
  IntentStore s;
  const std::vector<std::string> texts{"video inspection stream", "video inspection stream line", "pump sensors"};
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform01(), b = rng.uniform01(), c = rng.uniform01();
    log_outcome(s, e, texts[static_cast<std::size_t>(rng.uniform_int(0, 2))],
                {a / (a + b + c), b / (a + b + c), c / (a + b + c)}, std::nullopt, static_cast<std::uint64_t>(i), 0.8);
  }
  for (const auto& x : s.entries()) {
    CHECK(x.preference.on_simplex(1e-6));
    CHECK(intent::norm(x.embedding) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("age weights") {
  const intent::HashingEmbedder e;
  IntentStore s;
  s.insert(make_entry(e, "a", qoe::PreferenceVector::equal(), 0));
  s.insert(make_entry(e, "b", qoe::PreferenceVector::equal(), 10));
  s.advance_to(10);
  const auto flat = age_weights(s, s.now(), 0.0);
  CHECK(flat == std::vector<double>{1.0, 1.0});
  const auto aged = age_weights(s, s.now(), 0.1);
  CHECK(aged[1] == 1.0);
  CHECK(aged[0] == doctest::Approx(std::exp(-1.0)));
  CHECK(s.size() == 2);
}

TEST_CASE("bootstrap") {
  const intent::HashingEmbedder e;
  const auto& seeds = default_seed_records();
  CHECK(seeds.size() == 12);
  IntentStore s;
  const auto summary = bootstrap(s, e, seeds);
  CHECK(summary.skipped.empty());
  std::set<env::QoEClassId> classes;
  for (const auto& r : seeds) {
    if (r.qoe_class) classes.insert(*r.qoe_class);
  }
  CHECK(classes.size() == 3);
  CHECK(s.size() == summary.inserted);
  for (const auto& x : s.entries()) CHECK(x.timestamp == 0);

  IntentStore empty;
  CHECK(bootstrap(empty, e, std::vector<SeedRecord>{}).inserted == 0);
  CHECK(empty.empty());

  std::vector<SeedRecord> dup{seeds[0], seeds[0], seeds[1], {"", qoe::PreferenceVector::equal(), std::nullopt},
                              {"x", {0.9, 0.9, 0.9}, std::nullopt}};
  IntentStore d;
  const auto ds = bootstrap(d, e, dup);
  CHECK(d.size() < dup.size());
  CHECK(ds.inserted == 2);
  CHECK(ds.merged == 1);
  CHECK(ds.skipped.size() == 2);
}

TEST_CASE("seed record parsing") {
  const auto ok = parse_seed_records(
      "{\"intent_text\": \"a\", \"preference\": [0.2, 0.3, 0.5], \"qoe_class\": \"BestEffort\"}\n\n"
      "{\"intent_text\": \"b\", \"preference\": [0.2, 0.3, 0.5]}\n");
  CHECK(ok.size() == 2);
  CHECK(ok[0].qoe_class == env::QoEClassId::BestEffort);
  CHECK_FALSE(ok[1].qoe_class);
  try {
    parse_seed_records("{\"intent_text\": \"a\", \"preference\": [0.2, 0.3, 0.5]}\n{broken\n");
    FAIL("expected LoadError");
  } catch (const LoadError& err) {
    CHECK(std::string(err.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("snapshot round trip") {
  const intent::HashingEmbedder e;
  Rng rng(40);
  for (std::size_t n : {0u, 1u, 37u, 1000u}) {
    const auto s = random_store(e, rng, n);
    std::stringstream buf;
    write_snapshot(s, buf);
    const auto back = read_snapshot(buf);
    CHECK(back.size() == n);
    CHECK(fingerprint(back) == fingerprint(s));
  }

  const auto dir = std::filesystem::temp_directory_path() / "qoeslice_memory_test";
  std::filesystem::create_directories(dir);
  const auto s = random_store(e, rng, 20);
  save_snapshot(s, dir / "bank.jsonl");
  CHECK(fingerprint(load_snapshot(dir / "bank.jsonl")) == fingerprint(s));
  CHECK_THROWS_AS(load_snapshot(dir / "missing.jsonl"), NotFoundError);

  std::stringstream buf;
  write_snapshot(s, buf);
  std::string text = buf.str();

  SUBCASE("truncated file names the line") {
    std::size_t cut = 0;
    for (int line = 0; line < 3; ++line) cut = text.find('\n', cut) + 1;
    std::stringstream truncated(text.substr(0, cut + 40));
    try {
      read_snapshot(truncated);
      FAIL("expected LoadError");
    } catch (const LoadError& err) {
      CHECK(std::string(err.what()).find("line 4") != std::string::npos);
    }
  }
  SUBCASE("version mismatch") {
    const auto pos = text.find("\"version\":1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 11, "\"version\":2");
    std::stringstream bad(text);
    try {
      read_snapshot(bad);
      FAIL("expected LoadError");
    } catch (const LoadError& err) {
      CHECK(std::string(err.what()).find("line 1") != std::string::npos);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("template traffic stays bounded by the template count") {
  const intent::HashingEmbedder e;
  const auto& templates = env::default_intent_templates();
  std::vector<std::string> all;
  for (const auto& cls : templates.by_class) all.insert(all.end(), cls.begin(), cls.end());
  MemoryBank bank(e);
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    bank.log_outcome(all[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(all.size()) - 1))],
                     qoe::PreferenceVector::equal());
  }
  CHECK(bank.size() <= all.size());
  CHECK(bank.now() == 1000);
}

TEST_CASE("rag preferences cache follows the bank") {
  const intent::HashingEmbedder e;
  MemoryBank bank(e);
  intent::MockLlmClient mock;
  intent::IntentInference inference(e, mock);
  RagPreferences prefs(bank, inference);
  const auto r = request(1, env::QoEClassId::HighPriority, 2, 2, 2, "safety interlock");
  CHECK(prefs.preferences(r) == qoe::PreferenceVector{0.3, 0.5, 0.2});
  prefs.preferences(r);
  CHECK(prefs.cache_hits() == 1);
  bank.log_outcome("safety interlock", {0.3, 0.5, 0.2});
  prefs.preferences(r);
  CHECK(prefs.cache_hits() == 1);
  CHECK(prefs.infer(r).exemplars.size() == 1);
}

TEST_CASE("closed loop does not drift away from the class anchors") {
  const intent::HashingEmbedder e;
  intent::MockLlmClient mock;
  intent::IntentInference inference(e, mock);
  const env::SlicingEnv env{env::EnvConfig{}};
  const intent::InferenceConfig icfg;

  MemoryBank boot(e);
  boot.bootstrap(default_seed_records());
  MemoryBank evolved(e);
  evolved.bootstrap(default_seed_records());
  policy::CloudOnlyPolicy policy;
  CHECK(bench::log_episode_traffic(evolved, inference, env, policy, 200, {4, 20}, 3) > 200);

  const std::vector<std::pair<env::QoEClassId, std::string>> held_out{
      {env::QoEClassId::HighPriority, "safety trip signal for the crane controller"},
      {env::QoEClassId::HighPriority, "low latency haptic teleoperation"},
      {env::QoEClassId::MediumPriority, "video monitoring of the loading dock"},
      {env::QoEClassId::BestEffort, "nightly firmware download on a budget"},
      {env::QoEClassId::BestEffort, "office printer traffic"}};
  auto mean_cosine = [&](const MemoryBank& bank) {
    double total = 0.0;
    for (const auto& [cls, text] : held_out) {
      const auto out = bank.read([&](const IntentStore& s) { return inference.infer(request(1, cls, 3, 3, 2, text), s); });
      total += qoe::cosine(out.prefs, icfg.class_default(cls));
    }
    return total / static_cast<double>(held_out.size());
  };
  CHECK(mean_cosine(evolved) >= mean_cosine(boot) - 1e-12);
}

}  // TEST_SUITE
