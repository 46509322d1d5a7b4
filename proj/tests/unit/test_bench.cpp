#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qoeslice/bench/bench_config.hpp"
#include "qoeslice/bench/csv.hpp"
#include "qoeslice/bench/harness.hpp"
#include "qoeslice/bench/intent_stack.hpp"
#include "qoeslice/common/errors.hpp"

using namespace qoeslice;
using namespace qoeslice::bench;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

BenchConfig tiny_config() {
  BenchConfig cfg;
  cfg.algo.hidden = {16};
  cfg.algo.horizon = 256;
  cfg.algo.ppo.minibatch = 64;
  cfg.algo.ppo.epochs = 2;
  return cfg;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("csv") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  std::ostringstream out;
  CsvWriter w(out, {"a", "b"});
  w.field("x,y").field(2.5);
  w.end_row();
  CHECK(out.str() == "a,b\n\"x,y\",2.5\n");
  w.field(1);
  CHECK_THROWS_AS(w.end_row(), std::logic_error);
}

TEST_CASE("config") {
  const BenchConfig def;
  CHECK(bench_config_from_json(def.to_json()).hash() == def.hash());
  auto j = def.to_json();
  j["bench"]["episodes_per_point"] = 7;
  const auto changed = bench_config_from_json(j);
  CHECK(changed.episodes_per_point == 7);
  CHECK(changed.hash() != def.hash());
  CHECK_THROWS_AS(bench_config_from_json(nlohmann::json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(bench_config_from_json(nlohmann::json{{"env", {{"pool_size", "twelve"}}}}), ConfigError);
  CHECK_THROWS_AS(load_bench_config("/nonexistent/config.json"), NotFoundError);
}

TEST_CASE("train with zero steps writes a header-only curve") {
  TempDir dir("qoeslice_bench_train0");
  const auto cfg = tiny_config();
  IntentStack stack(cfg, "mock");
  const auto a = run_train(cfg, rl::Variant::QAPPO, 1, 0, dir.path, stack.preferences());
  CHECK(fs::exists(a.checkpoint));
  CHECK(slurp(a.curve) == "step,mean_reward,variant,seed,config_hash\n");
}

TEST_CASE("curves are deterministic") {
  TempDir dir("qoeslice_bench_curves");
  const auto cfg = tiny_config();
  IntentStack s1(cfg, "mock");
  const auto a = run_train(cfg, rl::Variant::QAPPO, 2, 768, dir.path / "a", s1.preferences());
  IntentStack s2(cfg, "mock");
  const auto b = run_train(cfg, rl::Variant::QAPPO, 2, 768, dir.path / "b", s2.preferences());
  const auto text = slurp(a.curve);
  CHECK(text == slurp(b.curve));
  CHECK(count_lines(text) == 4);
  CHECK(text.find("QAPPO,2," + cfg.hash()) != std::string::npos);
}

TEST_CASE("compare") {
  TempDir dir("qoeslice_bench_compare");
  const auto cfg = tiny_config();
  IntentStack stack(cfg, "mock");
  const std::vector<std::string> policies{kQappo, kPpo, kLocalFirst, kCloudOnly};

  SUBCASE("missing checkpoint names the expected path") {
    try {
      run_compare(cfg, policies, cfg.request_counts, 2, 1, dir.path, stack.preferences());
      FAIL("expected NotFoundError");
    } catch (const NotFoundError& e) {
      CHECK(std::string(e.what()).find(checkpoint_path(dir.path, rl::Variant::QAPPO, 1).string()) != std::string::npos);
    }
  }
  SUBCASE("four policies by five counts") {
    run_train(cfg, rl::Variant::QAPPO, 1, 0, dir.path, stack.preferences());
    run_train(cfg, rl::Variant::PPO, 1, 0, dir.path, stack.preferences());
    const auto rows = run_compare(cfg, policies, cfg.request_counts, 2, 1, dir.path, stack.preferences());
    REQUIRE(rows.size() == 20);
    CHECK(rows.front().policy == kQappo);
    CHECK(rows.back().policy == kCloudOnly);
    CHECK(rows.back().n_requests == 20);
    for (const auto& r : rows) {
      CHECK(r.availability_ratio >= 0.0);
      CHECK(r.availability_ratio <= 1.0);
      CHECK(r.episodes == 2);
    }
    std::ostringstream out;
    write_compare_csv(out, rows, cfg.hash());
    CHECK(count_lines(out.str()) == 21);
    CHECK(out.str().rfind("policy,n_requests,mean_latency_ms,mean_cost,mean_reliability_cost,availability_ratio,"
                          "episodes,seed,config_hash\n", 0) == 0);

    auto doubled = rows;
    for (auto r : rows) {
      r.seed = 2;
      r.availability_ratio = 0.0;
      doubled.push_back(r);
    }
    const auto mean = average_over_seeds(doubled);
    REQUIRE(mean.size() == 20);
    CHECK(mean[0].availability_ratio == doctest::Approx(rows[0].availability_ratio / 2));
    CHECK(mean[0].seed == 0);
  }
  SUBCASE("unknown policy") {
    CHECK_THROWS_AS(make_policy("Greedy", 1, dir.path), std::invalid_argument);
  }
}

TEST_CASE("oracle audit") {
  BenchConfig cfg;
  IntentStack stack(cfg, "mock");
  const auto a = run_oracle_audit(cfg, 12, 5, stack.preferences());
  const auto b = run_oracle_audit(cfg, 12, 5, stack.preferences());
  REQUIRE(a.rows.size() == 12);
  CHECK(a.summary.size() == 3);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].oracle_cost == b.rows[i].oracle_cost);
    CHECK(a.rows[i].policy_cost == b.rows[i].policy_cost);
    for (const auto& [name, cost] : a.rows[i].policy_cost) CHECK(cost >= a.rows[i].oracle_cost - 1e-12);
  }
  for (const auto& s : a.summary) CHECK(s.below_oracle == 0);
  std::ostringstream out;
  write_audit_csv(out, a, cfg.hash());
  CHECK(count_lines(out.str()) >= 12 * 3 + 1);

  cfg.audit.requests = 4;
  CHECK_THROWS_AS(run_oracle_audit(cfg, 1, 5, stack.preferences()), std::invalid_argument);
}

}  // TEST_SUITE
