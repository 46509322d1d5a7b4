#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qoeslice/bench/bench_config.hpp"
#include "qoeslice/policy/policy.hpp"
#include "qoeslice/qoe/preference_source.hpp"
#include "qoeslice/rl/trainer.hpp"

namespace qoeslice::bench {

inline constexpr const char* kQappo = "QAPPO";
inline constexpr const char* kPpo = "PPO";
inline constexpr const char* kLocalFirst = "LocalFirst";
inline constexpr const char* kCloudOnly = "CloudOnly";

// <dir>/qappo_seed<S>.ckpt or <dir>/ppo_seed<S>.ckpt
std::filesystem::path checkpoint_path(const std::filesystem::path& dir, rl::Variant variant, std::uint64_t seed);
std::filesystem::path curve_path(const std::filesystem::path& dir, rl::Variant variant, std::uint64_t seed);

// ---- train ---------------------------------------------------------------

struct TrainArtifacts {
  std::filesystem::path checkpoint;
  std::filesystem::path curve;
  rl::TrainResult result;
};

// Columns: step, mean_reward, variant, seed, config_hash.
void write_curve_csv(std::ostream& out, std::span<const rl::CurvePoint> curve, rl::Variant variant,
                     std::uint64_t seed, const std::string& config_hash);

TrainArtifacts run_train(const BenchConfig& cfg, rl::Variant variant, std::uint64_t seed, std::size_t steps,
                         const std::filesystem::path& out_dir, qoe::PreferenceSource& intents,
                         const std::function<void(const rl::CurvePoint&)>& on_progress = {});

// ---- compare -------------------------------------------------------------

struct CompareRow {
  std::string policy;
  int n_requests = 0;
  double mean_latency_ms = 0.0;
  double mean_cost = 0.0;
  double mean_reliability_cost = 0.0;
  double availability_ratio = 0.0;
  int episodes = 0;
  std::uint64_t seed = 0;
};

// Builds a policy by name; RL policies load their checkpoint for `seed` from
// `checkpoint_dir`. Throws NotFoundError naming the expected path, or
// std::invalid_argument for an unknown name.
std::unique_ptr<policy::Policy> make_policy(const std::string& name, std::uint64_t seed,
                                            const std::filesystem::path& checkpoint_dir);

// One row per (policy, count), policies outermost. Every policy sees the same
// traffic for a given (seed, count).
std::vector<CompareRow> run_compare(const BenchConfig& cfg, std::span<const std::string> policies,
                                    std::span<const int> request_counts, int episodes_per_point,
                                    std::uint64_t seed, const std::filesystem::path& checkpoint_dir,
                                    qoe::PreferenceSource& prefs);

// Means over seeds per (policy, count); the seed column of the result is 0.
std::vector<CompareRow> average_over_seeds(std::span<const CompareRow> rows);

// Columns: policy, n_requests, mean_latency_ms, mean_cost,
// mean_reliability_cost, availability_ratio, episodes, seed, config_hash.
void write_compare_csv(std::ostream& out, std::span<const CompareRow> rows, const std::string& config_hash);

// ---- oracle audit --------------------------------------------------------

struct AuditRow {
  int instance = 0;
  double oracle_cost = 0.0;
  std::map<std::string, double> policy_cost;
};

struct AuditSummary {
  std::string policy;
  double mean_gap = 0.0;  // policy - oracle
  double max_gap = 0.0;
  double mean_ratio = 0.0;  // policy / oracle
  int below_oracle = 0;     // rows where the policy beat the oracle; must be 0
};

struct AuditReport {
  std::vector<AuditRow> rows;
  std::vector<AuditSummary> summary;
};

// The small environment the audit instances are drawn from.
env::EnvConfig audit_env_config(const BenchConfig& cfg);

// Audited policies: LocalFirst, CloudOnly, a uniformly random feasible policy
// and any `extra` ones (which must fit audit_env_config). Throws
// std::invalid_argument when the instance shape exceeds the brute-force guard.
AuditReport run_oracle_audit(const BenchConfig& cfg, int instances, std::uint64_t seed,
                             qoe::PreferenceSource& prefs, std::span<policy::Policy* const> extra = {});

// Columns: instance, policy, oracle_cost, policy_cost, gap, ratio, config_hash;
// then a blank line and the summary table.
void write_audit_csv(std::ostream& out, const AuditReport& report, const std::string& config_hash);

// ---- memory --------------------------------------------------------------

// Generates `episodes` episodes of template traffic, infers preferences via
// the bank, deploys with `policy` and logs every slice outcome back.
// Returns the number of logged outcomes.
std::size_t log_episode_traffic(memory::MemoryBank& bank, const intent::IntentInference& inference,
                                const env::SlicingEnv& env, policy::Policy& policy, int episodes,
                                env::IntRange requests_per_episode, std::uint64_t seed);

// Columns: id, timestamp, merge_count, age_weight, w_latency, w_reliability,
// w_econ, intent_text.
void write_memory_csv(std::ostream& out, const intent::IntentStore& store, double lambda);

}  // namespace qoeslice::bench
