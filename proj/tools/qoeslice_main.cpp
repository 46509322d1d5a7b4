#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qoeslice/bench/csv.hpp"
#include "qoeslice/bench/harness.hpp"
#include "qoeslice/bench/intent_stack.hpp"
#include "qoeslice/common/errors.hpp"
#include "qoeslice/env/slicing_env.hpp"
#include "qoeslice/policy/baselines.hpp"

namespace fs = std::filesystem;
using namespace qoeslice;

namespace {

struct Common {
  std::string config;
  std::string out = "runs";
  std::string client = "mock";
  std::optional<std::uint64_t> seed;
};

bench::BenchConfig load(const Common& c) {
  return c.config.empty() ? bench::BenchConfig{} : bench::load_bench_config(c.config);
}

std::vector<std::uint64_t> seeds_for(const Common& c, const bench::BenchConfig& cfg) {
  return c.seed ? std::vector<std::uint64_t>{*c.seed} : cfg.seeds;
}

void add_common(CLI::App* app, Common& c, bool with_out = true) {
  app->add_option("--config", c.config, "JSON config file (defaults built in)");
  app->add_option("--seed", c.seed, "Single seed (default: every seed in the config)");
  app->add_option("--client", c.client, "LLM client")->check(CLI::IsMember({"mock", "remote"}));
  if (with_out) app->add_option("--out", c.out, "Output directory")->capture_default_str();
}

std::ofstream open_file(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

void print_rows(const std::vector<bench::CompareRow>& rows) {
  std::printf("%-11s %4s %10s %9s %9s %8s\n", "policy", "n", "latency", "cost", "rel", "avail");
  for (const auto& r : rows) {
    std::printf("%-11s %4d %10.2f %9.2f %9.3f %8.3f\n", r.policy.c_str(), r.n_requests, r.mean_latency_ms,
                r.mean_cost, r.mean_reliability_cost, r.availability_ratio);
  }
}

int cmd_train(const Common& c, const std::string& variant, std::optional<std::size_t> steps) {
  const auto cfg = load(c);
  bench::IntentStack stack(cfg, c.client);
  std::vector<rl::Variant> variants;
  if (variant == "both") {
    variants = {rl::Variant::QAPPO, rl::Variant::PPO};
  } else {
    variants = {rl::variant_from_string(variant)};
  }
  for (const auto seed : seeds_for(c, cfg)) {
    for (const auto v : variants) {
      const auto a = bench::run_train(cfg, v, seed, steps.value_or(cfg.algo.total_steps), c.out,
                                      stack.preferences());
      const double last = a.result.curve.empty() ? 0.0 : a.result.curve.back().mean_reward;
      std::printf("%s seed %llu: %zu updates, final mean reward %.3f\n  %s\n  %s\n", rl::to_string(v).c_str(),
                  static_cast<unsigned long long>(seed), a.result.updates.size(), last, a.checkpoint.c_str(),
                  a.curve.c_str());
    }
  }
  return 0;
}

int cmd_compare(const Common& c, std::vector<std::string> policies, std::vector<int> counts,
                std::optional<int> episodes, std::string checkpoints) {
  const auto cfg = load(c);
  if (counts.empty()) counts = cfg.request_counts;
  if (checkpoints.empty()) checkpoints = c.out;
  bench::IntentStack stack(cfg, c.client);
  std::vector<bench::CompareRow> rows;
  for (const auto seed : seeds_for(c, cfg)) {
    auto r = bench::run_compare(cfg, policies, counts, episodes.value_or(cfg.episodes_per_point), seed, checkpoints,
                                stack.preferences());
    rows.insert(rows.end(), r.begin(), r.end());
  }
  const auto mean = bench::average_over_seeds(rows);
  {
    auto out = open_file(fs::path(c.out) / "compare.csv");
    bench::write_compare_csv(out, rows, cfg.hash());
  }
  {
    auto out = open_file(fs::path(c.out) / "compare_mean.csv");
    bench::write_compare_csv(out, mean, cfg.hash());
  }
  print_rows(mean);
  std::printf("wrote %s and %s\n", (fs::path(c.out) / "compare.csv").c_str(),
              (fs::path(c.out) / "compare_mean.csv").c_str());
  return 0;
}

int cmd_intent(const Common& c, const std::string& text, const std::string& store, bool bootstrap,
               const std::string& cls) {
  const auto cfg = load(c);
  std::optional<fs::path> snapshot;
  if (!store.empty()) snapshot = store;
  bench::IntentStack stack(cfg, c.client, bootstrap ? bench::StoreInit::Bootstrap : bench::StoreInit::Empty,
                           snapshot);
  env::SliceRequest request;
  request.qoe_class = env::class_from_string(cls);
  request.intent_text = text;
  const auto inf = stack.preferences().infer(request);
  std::printf("intent: %s\n", text.c_str());
  std::printf("store: %zu entries, %zu exemplars retrieved\n", stack.bank().size(), inf.exemplars.size());
  for (const auto& ex : inf.exemplars) {
    const auto& p = ex.entry.preference;
    std::printf("  score %.4f (cosine %.4f)  [%.4f, %.4f, %.4f]  %s\n", ex.score, ex.cosine, p.latency,
                p.reliability, p.econ, ex.entry.intent_text.c_str());
  }
  if (inf.fell_back) {
    std::printf("client output unusable after %d attempts (%s); using the %s default\n", inf.attempts,
                inf.error.c_str(), cls.c_str());
  }
  std::printf("preference (latency, reliability, economics) = (%.4f, %.4f, %.4f)\n", inf.prefs.latency,
              inf.prefs.reliability, inf.prefs.econ);
  return 0;
}

int cmd_audit(const Common& c, std::optional<int> instances) {
  const auto cfg = load(c);
  bench::IntentStack stack(cfg, c.client);
  const auto seed = c.seed.value_or(cfg.seeds.front());
  const auto report = bench::run_oracle_audit(cfg, instances.value_or(cfg.audit.instances), seed,
                                              stack.preferences());
  const auto path = fs::path(c.out) / "oracle_audit.csv";
  auto out = open_file(path);
  bench::write_audit_csv(out, report, cfg.hash());
  std::printf("%zu instances, seed %llu\n", report.rows.size(), static_cast<unsigned long long>(seed));
  std::printf("%-11s %10s %10s %10s %6s\n", "policy", "mean_gap", "max_gap", "mean_ratio", "below");
  for (const auto& s : report.summary) {
    std::printf("%-11s %10.4f %10.4f %10.4f %6d\n", s.policy.c_str(), s.mean_gap, s.max_gap, s.mean_ratio,
                s.below_oracle);
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_memory(const Common& c, const std::string& store, int log_episodes, const std::string& save,
               const std::string& csv) {
  const auto cfg = load(c);
  std::optional<fs::path> snapshot;
  if (!store.empty()) snapshot = store;
  bench::IntentStack stack(cfg, c.client, bench::StoreInit::Bootstrap, snapshot);
  if (log_episodes > 0) {
    const env::SlicingEnv env(cfg.env);
    policy::LocalFirstPolicy policy;
    const auto n = bench::log_episode_traffic(stack.bank(), stack.inference(), env, policy, log_episodes,
                                              cfg.algo.episode_requests, c.seed.value_or(cfg.seeds.front()));
    std::printf("logged %zu outcomes from %d episodes\n", n, log_episodes);
  }
  const auto snapshot_store = stack.bank().copy();
  if (csv.empty()) {
    bench::write_memory_csv(std::cout, snapshot_store, cfg.memory.aging_lambda);
  } else {
    auto out = open_file(csv);
    bench::write_memory_csv(out, snapshot_store, cfg.memory.aging_lambda);
    std::printf("%zu entries, clock %llu; wrote %s\n", snapshot_store.size(),
                static_cast<unsigned long long>(snapshot_store.now()), csv.c_str());
  }
  if (!save.empty()) {
    stack.bank().save(save);
    std::printf("snapshot saved to %s\n", save.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QoE-aware network slicing workbench"};
  app.require_subcommand(1);

  Common train_c;
  std::string variant = "both";
  std::optional<std::size_t> steps;
  auto* train = app.add_subcommand("train", "Train QAPPO and/or PPO; writes checkpoints and reward curves");
  add_common(train, train_c);
  train->add_option("--variant", variant, "QAPPO, PPO or both")
      ->check(CLI::IsMember({"QAPPO", "PPO", "both", "qappo", "ppo"}))
      ->capture_default_str();
  train->add_option("--steps", steps, "Environment steps (default from config)");

  Common cmp_c;
  std::vector<std::string> policies{bench::kQappo, bench::kPpo, bench::kLocalFirst, bench::kCloudOnly};
  std::vector<int> counts;
  std::optional<int> episodes;
  std::string checkpoints;
  auto* compare = app.add_subcommand("compare", "Sweep request counts and compare policies");
  add_common(compare, cmp_c);
  compare->add_option("--policies", policies, "Subset of QAPPO PPO LocalFirst CloudOnly")->capture_default_str();
  compare->add_option("--counts", counts, "Request counts (default from config)");
  compare->add_option("--episodes", episodes, "Evaluation episodes per point");
  compare->add_option("--checkpoints", checkpoints, "Checkpoint directory (default: --out)");

  Common intent_c;
  std::string text;
  std::string store;
  bool bootstrap = false;
  std::string cls = "MediumPriority";
  auto* intent = app.add_subcommand("intent", "Infer a preference vector for one intent");
  add_common(intent, intent_c, false);
  intent->add_option("text", text, "Intent text")->required();
  intent->add_option("--store", store, "Memory snapshot to retrieve from (absent: zero-shot)");
  intent->add_flag("--bootstrap", bootstrap, "Retrieve from the shipped seed records");
  intent->add_option("--class", cls, "QoE class used for the fallback vector")->capture_default_str();

  Common audit_c;
  std::optional<int> instances;
  auto* audit = app.add_subcommand("oracle-audit", "Compare policies with exhaustive search on small instances");
  add_common(audit, audit_c);
  audit->add_option("--instances", instances, "Number of random instances (default from config)");

  Common mem_c;
  std::string mem_store;
  int log_episodes = 0;
  std::string save;
  std::string csv;
  auto* mem = app.add_subcommand("memory-inspect", "List memory entries, optionally after logging traffic");
  add_common(mem, mem_c, false);
  mem->add_option("--store", mem_store, "Snapshot to load (default: shipped seed records)");
  mem->add_option("--log-episodes", log_episodes, "Episodes of Local-First traffic to log first");
  mem->add_option("--save", save, "Write the resulting snapshot here");
  mem->add_option("--csv", csv, "Write the listing here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return cmd_train(train_c, variant, steps);
    if (*compare) return cmd_compare(cmp_c, policies, counts, episodes, checkpoints);
    if (*intent) return cmd_intent(intent_c, text, store, bootstrap, cls);
    if (*audit) return cmd_audit(audit_c, instances);
    if (*mem) return cmd_memory(mem_c, mem_store, log_episodes, save, csv);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
