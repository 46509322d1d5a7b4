#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qoeslice/env/slicing_env.hpp"
#include "qoeslice/qoe/preference.hpp"

namespace qoeslice::policy {

// Chooses one deployment per arriving request.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual env::DeploymentAction choose(const env::SlicingEnv& env, const env::NetworkState& state,
                                       const env::SliceRequest& request, const qoe::PreferenceVector& prefs) = 0;
};

using ActionChooser = std::function<env::DeploymentAction(const env::NetworkState&, const env::SliceRequest&,
                                                          const qoe::PreferenceVector&)>;

struct StepCost {
  double weighted = 0.0;        // J under the request's preferences
  std::size_t violations = 0;   // own violations plus collateral ones
  double total(double penalty) const { return weighted + penalty * static_cast<double>(violations); }
};

StepCost step_cost(const env::SlicingEnv& env, const env::StepResult& step, const qoe::PreferenceVector& prefs);

struct EpisodeResult {
  std::vector<env::DeploymentAction> actions;
  // One per request in arrival order, Reliability re-audited on the final topology.
  std::vector<env::DeploymentOutcome> outcomes;
  double total_cost = 0.0;  // sum of J plus penalty per violation
  env::NetworkState final_state;
};

// Plays a request sequence from `initial`. Infeasible sentinels are applied as-is.
EpisodeResult run_episode(const env::SlicingEnv& env, env::NetworkState initial,
                          std::span<const env::SliceRequest> requests,
                          std::span<const qoe::PreferenceVector> prefs, const ActionChooser& choose);

// Same evaluation for a fixed action sequence (must match requests in length).
EpisodeResult replay_episode(const env::SlicingEnv& env, env::NetworkState initial,
                             std::span<const env::SliceRequest> requests,
                             std::span<const qoe::PreferenceVector> prefs,
                             std::span<const env::DeploymentAction> actions);

}  // namespace qoeslice::policy
