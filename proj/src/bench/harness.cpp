#include "qoeslice/bench/harness.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "qoeslice/bench/csv.hpp"
#include "qoeslice/common/errors.hpp"
#include "qoeslice/common/rng.hpp"
#include "qoeslice/env/request_generator.hpp"
#include "qoeslice/policy/baselines.hpp"
#include "qoeslice/policy/brute_force.hpp"
#include "qoeslice/qoe/qoe_model.hpp"
#include "qoeslice/rl/checkpoint.hpp"

namespace qoeslice::bench {

namespace fs = std::filesystem;

namespace {

std::string lower_variant(rl::Variant v) { return v == rl::Variant::QAPPO ? "qappo" : "ppo"; }

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Uniform over the feasible action list; the audit's sanity baseline.
class RandomFeasiblePolicy final : public policy::Policy {
 public:
  explicit RandomFeasiblePolicy(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "Random"; }
  env::DeploymentAction choose(const env::SlicingEnv& env, const env::NetworkState& state,
                               const env::SliceRequest& request, const qoe::PreferenceVector&) override {
    auto actions = env.feasible_actions(state, request);
    if (actions.empty()) return env::DeploymentAction::infeasible();
    const auto i = rng_.uniform_int(0, static_cast<std::int64_t>(actions.size()) - 1);
    return actions[static_cast<std::size_t>(i)];
  }

 private:
  Rng rng_;
};

}  // namespace

fs::path checkpoint_path(const fs::path& dir, rl::Variant variant, std::uint64_t seed) {
  return dir / (lower_variant(variant) + "_seed" + std::to_string(seed) + ".ckpt");
}

fs::path curve_path(const fs::path& dir, rl::Variant variant, std::uint64_t seed) {
  return dir / (lower_variant(variant) + "_seed" + std::to_string(seed) + "_curve.csv");
}

void write_curve_csv(std::ostream& out, std::span<const rl::CurvePoint> curve, rl::Variant variant,
                     std::uint64_t seed, const std::string& config_hash) {
  CsvWriter w(out, {"step", "mean_reward", "variant", "seed", "config_hash"});
  for (const auto& p : curve) {
    w.field(static_cast<std::uint64_t>(p.step)).field(p.mean_reward).field(rl::to_string(variant)).field(seed);
    w.field(config_hash);
    w.end_row();
  }
}

TrainArtifacts run_train(const BenchConfig& cfg, rl::Variant variant, std::uint64_t seed, std::size_t steps,
                         const fs::path& out_dir, qoe::PreferenceSource& intents,
                         const std::function<void(const rl::CurvePoint&)>& on_progress) {
  TrainArtifacts a;
  a.result = rl::train(cfg.env, cfg.algo, variant, &intents, steps, seed, on_progress);
  fs::create_directories(out_dir);
  a.checkpoint = checkpoint_path(out_dir, variant, seed);
  a.curve = curve_path(out_dir, variant, seed);
  rl::save_checkpoint(a.checkpoint.string(), a.result.params);
  auto out = open_out(a.curve);
  write_curve_csv(out, a.result.curve, variant, seed, cfg.hash());
  return a;
}

std::unique_ptr<policy::Policy> make_policy(const std::string& name, std::uint64_t seed, const fs::path& checkpoint_dir) {
  if (name == kLocalFirst) return std::make_unique<policy::LocalFirstPolicy>();
  if (name == kCloudOnly) return std::make_unique<policy::CloudOnlyPolicy>();
  if (name == kQappo || name == kPpo) {
    const auto variant = rl::variant_from_string(name);
    const auto path = checkpoint_path(checkpoint_dir, variant, seed);
    if (!fs::exists(path)) {
      throw NotFoundError("missing checkpoint for " + name + " seed " + std::to_string(seed) + ": expected " +
                          path.string() + " (run `qoeslice train` first)");
    }
    auto params = rl::load_checkpoint(path.string());
    if (params.variant != variant) throw LoadError("checkpoint " + path.string() + " holds a different variant", 0);
    return std::make_unique<rl::RlPolicy>(std::move(params));
  }
  throw std::invalid_argument("unknown policy: " + name + " (expected QAPPO, PPO, LocalFirst or CloudOnly)");
}

std::vector<CompareRow> run_compare(const BenchConfig& cfg, std::span<const std::string> policies,
                                    std::span<const int> request_counts, int episodes_per_point,
                                    std::uint64_t seed, const fs::path& checkpoint_dir,
                                    qoe::PreferenceSource& prefs) {
  const env::SlicingEnv env(cfg.env);
  // Resolve every policy first so a missing checkpoint fails before any work.
  std::vector<std::unique_ptr<policy::Policy>> built;
  for (const auto& name : policies) built.push_back(make_policy(name, seed, checkpoint_dir));

  std::vector<CompareRow> rows;
  for (std::size_t i = 0; i < built.size(); ++i) {
    for (const int n : request_counts) {
      const auto s = rl::evaluate(*built[i], env, n, prefs, episodes_per_point, seed);
      rows.push_back({policies[i], n, s.mean_latency_ms, s.mean_cost, s.mean_reliability_cost, s.availability,
                      episodes_per_point, seed});
    }
  }
  return rows;
}

std::vector<CompareRow> average_over_seeds(std::span<const CompareRow> rows) {
  std::vector<CompareRow> out;
  std::vector<int> counts;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const CompareRow& o) { return o.policy == r.policy && o.n_requests == r.n_requests; });
    if (it == out.end()) {
      out.push_back({r.policy, r.n_requests, 0.0, 0.0, 0.0, 0.0, 0, 0});
      counts.push_back(0);
      it = out.end() - 1;
    }
    auto& c = counts[static_cast<std::size_t>(it - out.begin())];
    ++c;
    it->mean_latency_ms += r.mean_latency_ms;
    it->mean_cost += r.mean_cost;
    it->mean_reliability_cost += r.mean_reliability_cost;
    it->availability_ratio += r.availability_ratio;
    it->episodes += r.episodes;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double k = counts[i];
    out[i].mean_latency_ms /= k;
    out[i].mean_cost /= k;
    out[i].mean_reliability_cost /= k;
    out[i].availability_ratio /= k;
  }
  return out;
}

void write_compare_csv(std::ostream& out, std::span<const CompareRow> rows, const std::string& config_hash) {
  CsvWriter w(out, {"policy", "n_requests", "mean_latency_ms", "mean_cost", "mean_reliability_cost",
                    "availability_ratio", "episodes", "seed", "config_hash"});
  for (const auto& r : rows) {
    w.field(r.policy).field(r.n_requests).field(r.mean_latency_ms).field(r.mean_cost);
    w.field(r.mean_reliability_cost).field(r.availability_ratio).field(r.episodes).field(r.seed);
    w.field(config_hash);
    w.end_row();
  }
}

env::EnvConfig audit_env_config(const BenchConfig& cfg) {
  env::EnvConfig small = cfg.env;
  small.pool_size = cfg.audit.pool_size;
  small.chain_length_range = {cfg.audit.chain_length, cfg.audit.chain_length};
  for (auto& c : small.classes) c.chain_length = {cfg.audit.chain_length, cfg.audit.chain_length};
  return small;
}

AuditReport run_oracle_audit(const BenchConfig& cfg, int instances, std::uint64_t seed,
                             qoe::PreferenceSource& prefs, std::span<policy::Policy* const> extra) {
  if (instances < 0) throw std::invalid_argument("oracle audit: instances must be non-negative");
  const policy::OracleLimits limits;
  if (cfg.audit.requests > static_cast<int>(limits.max_requests) || cfg.audit.chain_length > limits.max_chain_length ||
      cfg.audit.pool_size > limits.max_pool_size) {
    throw std::invalid_argument("oracle audit refused: instances of " + std::to_string(cfg.audit.requests) +
                                " requests, chain " + std::to_string(cfg.audit.chain_length) + ", pool " +
                                std::to_string(cfg.audit.pool_size) + " exceed the brute-force guard (" +
                                std::to_string(limits.max_requests) + ", " + std::to_string(limits.max_chain_length) +
                                ", " + std::to_string(limits.max_pool_size) + ")");
  }
  const env::EnvConfig small = audit_env_config(cfg);
  const env::SlicingEnv env(small);

  policy::LocalFirstPolicy local_first;
  policy::CloudOnlyPolicy cloud_only;
  RandomFeasiblePolicy random(Rng::mix(seed, 0xA0D1));
  std::vector<policy::Policy*> audited{&local_first, &cloud_only, &random};
  audited.insert(audited.end(), extra.begin(), extra.end());

  AuditReport report;
  for (int i = 0; i < instances; ++i) {
    const auto spec = rl::make_episode(small, cfg.audit.requests, Rng::mix(seed, 0x0AC1E), static_cast<std::uint64_t>(i));
    std::vector<qoe::PreferenceVector> p;
    for (const auto& r : spec.requests) p.push_back(prefs.preferences(r));
    const auto initial = env.reset(spec.env_seed);
    const auto oracle = policy::brute_force_optimal(env, initial, spec.requests, p, limits);

    AuditRow row{i, oracle.total_cost, {}};
    for (policy::Policy* pol : audited) {
      const auto result = policy::run_episode(
          env, initial, spec.requests, p,
          [&](const env::NetworkState& st, const env::SliceRequest& r, const qoe::PreferenceVector& pv) {
            return pol->choose(env, st, r, pv);
          });
      row.policy_cost[pol->name()] = result.total_cost;
    }
    report.rows.push_back(std::move(row));
  }

  for (policy::Policy* pol : audited) {
    AuditSummary s;
    s.policy = pol->name();
    for (const auto& row : report.rows) {
      const double cost = row.policy_cost.at(s.policy);
      const double gap = cost - row.oracle_cost;
      s.mean_gap += gap;
      s.max_gap = std::max(s.max_gap, gap);
      s.mean_ratio += row.oracle_cost > 0.0 ? cost / row.oracle_cost : 1.0;
      if (gap < -1e-9) ++s.below_oracle;
    }
    if (!report.rows.empty()) {
      s.mean_gap /= static_cast<double>(report.rows.size());
      s.mean_ratio /= static_cast<double>(report.rows.size());
    }
    report.summary.push_back(s);
  }
  return report;
}

void write_audit_csv(std::ostream& out, const AuditReport& report, const std::string& config_hash) {
  {
    CsvWriter w(out, {"instance", "policy", "oracle_cost", "policy_cost", "gap", "ratio", "config_hash"});
    for (const auto& row : report.rows) {
      for (const auto& [name, cost] : row.policy_cost) {
        w.field(row.instance).field(name).field(row.oracle_cost).field(cost).field(cost - row.oracle_cost);
        w.field(row.oracle_cost > 0.0 ? cost / row.oracle_cost : 1.0).field(config_hash);
        w.end_row();
      }
    }
  }
  out << '\n';
  CsvWriter w(out, {"policy", "instances", "mean_gap", "max_gap", "mean_ratio", "below_oracle", "config_hash"});
  for (const auto& s : report.summary) {
    w.field(s.policy).field(static_cast<std::uint64_t>(report.rows.size())).field(s.mean_gap).field(s.max_gap);
    w.field(s.mean_ratio).field(s.below_oracle).field(config_hash);
    w.end_row();
  }
}

std::size_t log_episode_traffic(memory::MemoryBank& bank, const intent::IntentInference& inference,
                                const env::SlicingEnv& env, policy::Policy& policy, int episodes,
                                env::IntRange requests_per_episode, std::uint64_t seed) {
  Rng lengths(Rng::mix(seed, 0x10C));
  std::size_t logged = 0;
  for (int e = 0; e < episodes; ++e) {
    const int n = static_cast<int>(lengths.uniform_int(requests_per_episode.min, requests_per_episode.max));
    const auto spec = rl::make_episode(env.config(), n, seed, static_cast<std::uint64_t>(e));
    auto state = env.reset(spec.env_seed);
    for (const auto& request : spec.requests) {
      const auto inferred =
          bank.read([&](const intent::IntentStore& store) { return inference.infer(request, store); });
      const auto action = policy.choose(env, state, request, inferred.prefs);
      auto step = env.apply(std::move(state), request, action);
      state = std::move(step.state);
      const auto metrics = qoe::metrics_of(step.outcome, env.config());
      bank.log_outcome(request.intent_text, inferred.prefs, memory::summarize(metrics, step.outcome.served()));
      ++logged;
    }
  }
  return logged;
}

void write_memory_csv(std::ostream& out, const intent::IntentStore& store, double lambda) {
  CsvWriter w(out, {"id", "timestamp", "merge_count", "age_weight", "w_latency", "w_reliability", "w_econ",
                    "intent_text"});
  for (const auto& e : store.entries()) {
    w.field(e.id).field(e.timestamp).field(e.merge_count).field(intent::age_weight(store.now(), e.timestamp, lambda));
    w.field(e.preference.latency).field(e.preference.reliability).field(e.preference.econ).field(e.intent_text);
    w.end_row();
  }
}

}  // namespace qoeslice::bench
