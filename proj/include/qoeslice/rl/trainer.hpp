#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "qoeslice/env/slicing_env.hpp"
#include "qoeslice/policy/policy.hpp"
#include "qoeslice/qoe/preference_source.hpp"
#include "qoeslice/rl/ppo.hpp"

namespace qoeslice::rl {

struct AlgoConfig {
  PpoConfig ppo;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  int horizon = 4096;
  std::vector<int> hidden = {128, 128};
  std::size_t total_steps = 200000;
  env::IntRange episode_requests = {4, 20};

  bool operator==(const AlgoConfig&) const;
};

void to_json(nlohmann::json& j, const AlgoConfig& cfg);
void from_json(const nlohmann::json& j, AlgoConfig& cfg);

struct CurvePoint {
  std::size_t step = 0;
  double mean_reward = 0.0;  // mean undiscounted return of episodes finished in the rollout
};

struct TrainResult {
  PolicyParams params;
  std::vector<CurvePoint> curve;
  std::vector<LossStats> updates;
};

// Per-episode request stream shared by training and evaluation. Episode e of
// a run with seed s always sees the same requests and node tables.
struct EpisodeSpec {
  std::vector<env::SliceRequest> requests;
  std::uint64_t env_seed = 0;
};
EpisodeSpec make_episode(const env::EnvConfig& cfg, int n_requests, std::uint64_t seed, std::uint64_t episode);

// Trains one policy. QAPPO observes and is rewarded with the preferences from
// `intents` (required); PPO observes zeros and is rewarded with equal weights.
// Fully deterministic for a given seed.
TrainResult train(const env::EnvConfig& env_cfg, const AlgoConfig& algo, Variant variant,
                  qoe::PreferenceSource* intents, std::size_t total_steps, std::uint64_t seed,
                  const std::function<void(const CurvePoint&)>& on_progress = {});

// Greedy (or sampling) deployment with a trained actor.
class RlPolicy final : public policy::Policy {
 public:
  explicit RlPolicy(PolicyParams params, ActMode mode = ActMode::Greedy, std::uint64_t seed = 0);

  std::string name() const override { return to_string(params_.variant); }
  env::DeploymentAction choose(const env::SlicingEnv& env, const env::NetworkState& state,
                               const env::SliceRequest& request, const qoe::PreferenceVector& prefs) override;
  const PolicyParams& params() const { return params_; }

 private:
  PolicyParams params_;
  ActMode mode_;
  Rng rng_;
  std::vector<float> features_;
};

struct EvalSummary {
  double mean_latency_ms = 0.0;
  double mean_cost = 0.0;
  double mean_reliability_cost = 0.0;
  double availability = 0.0;
  double mean_weighted_cost = 0.0;  // per slice, including penalties
  std::size_t slices = 0;
  std::size_t episodes = 0;
};

// Plays `episodes` fresh episodes of n_requests each and aggregates per-slice
// metrics over all of them. Episode streams depend only on (seed, n_requests),
// so different policies evaluated with the same seed see identical traffic.
// Throws std::invalid_argument for episodes < 1 or n_requests < 1.
EvalSummary evaluate(policy::Policy& policy, const env::SlicingEnv& env, int n_requests,
                     qoe::PreferenceSource& prefs, int episodes, std::uint64_t seed);

}  // namespace qoeslice::rl
