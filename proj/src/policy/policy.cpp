#include "qoeslice/policy/policy.hpp"

#include <stdexcept>

#include "qoeslice/qoe/qoe_model.hpp"

namespace qoeslice::policy {

StepCost step_cost(const env::SlicingEnv& env, const env::StepResult& step, const qoe::PreferenceVector& prefs) {
  const auto m = qoe::metrics_of(step.outcome, env.config());
  return {qoe::weighted_cost(m, prefs), step.outcome.violations.size() + step.collateral.size()};
}

namespace {

EpisodeResult play(const env::SlicingEnv& env, env::NetworkState state, std::span<const env::SliceRequest> requests,
                   std::span<const qoe::PreferenceVector> prefs,
                   const std::function<env::DeploymentAction(std::size_t, const env::NetworkState&)>& pick) {
  if (prefs.size() != requests.size()) throw std::invalid_argument("run_episode: one preference vector per request");
  const double penalty = env.config().violation_penalty;
  EpisodeResult result;
  result.actions.reserve(requests.size());
  result.outcomes.reserve(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    env::DeploymentAction action = pick(i, state);
    env::StepResult step = env.apply(std::move(state), requests[i], action);
    result.total_cost += step_cost(env, step, prefs[i]).total(penalty);
    result.outcomes.push_back(std::move(step.outcome));
    result.actions.push_back(std::move(action));
    state = std::move(step.state);
  }
  for (auto& o : result.outcomes) {
    if (!o.has(env::Violation::Infeasible) && !qoe::sharing_within_bound(state, o.slice_id, env.config())) {
      o.add(env::Violation::Reliability);
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace

EpisodeResult run_episode(const env::SlicingEnv& env, env::NetworkState initial,
                          std::span<const env::SliceRequest> requests, std::span<const qoe::PreferenceVector> prefs,
                          const ActionChooser& choose) {
  return play(env, std::move(initial), requests, prefs,
              [&](std::size_t i, const env::NetworkState& s) { return choose(s, requests[i], prefs[i]); });
}

EpisodeResult replay_episode(const env::SlicingEnv& env, env::NetworkState initial,
                             std::span<const env::SliceRequest> requests, std::span<const qoe::PreferenceVector> prefs,
                             std::span<const env::DeploymentAction> actions) {
  if (actions.size() != requests.size()) throw std::invalid_argument("replay_episode: one action per request");
  return play(env, std::move(initial), requests, prefs,
              [&](std::size_t i, const env::NetworkState&) { return actions[i]; });
}

}  // namespace qoeslice::policy
