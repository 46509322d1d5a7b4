#include "qoeslice/policy/brute_force.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "qoeslice/qoe/qoe_model.hpp"

namespace qoeslice::policy {

namespace {

struct Search {
  const env::SlicingEnv& env;
  std::span<const env::SliceRequest> requests;
  std::span<const qoe::PreferenceVector> prefs;
  double penalty;
  std::vector<env::DeploymentAction> current;
  OracleResult best;

  // Collateral violations are charged when caused, so the running sum equals
  // the audited episode cost at the leaves.
  void descend(const env::NetworkState& state, std::size_t i, double cost_so_far) {
    if (i == requests.size()) {
      ++best.sequences_explored;
      // Strict '<' keeps the first (lexicographically smallest) sequence on ties.
      if (cost_so_far < best.total_cost) {
        best.total_cost = cost_so_far;
        best.actions = current;
      }
      return;
    }
    // Declining is always open to a policy (Cloud-Only declines when the cloud
    // is saturated), so the sentinel is searched too; it sorts last.
    auto actions = env.feasible_actions(state, requests[i]);
    actions.push_back(env::DeploymentAction::infeasible());
    std::sort(actions.begin(), actions.end());
    for (const auto& a : actions) {
      env::StepResult step = env.apply(state, requests[i], a);
      const double c = step_cost(env, step, prefs[i]).total(penalty);
      current.push_back(a);
      descend(step.state, i + 1, cost_so_far + c);
      current.pop_back();
    }
  }
};

}  // namespace

OracleResult brute_force_optimal(const env::SlicingEnv& env, const env::NetworkState& initial,
                                 std::span<const env::SliceRequest> requests,
                                 std::span<const qoe::PreferenceVector> prefs, const OracleLimits& limits) {
  if (requests.size() != prefs.size()) throw std::invalid_argument("brute_force_optimal: one preference per request");
  if (requests.size() > limits.max_requests) {
    throw std::invalid_argument("brute_force_optimal: " + std::to_string(requests.size()) +
                                " requests exceed the limit of " + std::to_string(limits.max_requests));
  }
  if (static_cast<int>(initial.nodes.size()) > limits.max_pool_size) {
    throw std::invalid_argument("brute_force_optimal: pool of " + std::to_string(initial.nodes.size()) +
                                " nodes exceeds the limit of " + std::to_string(limits.max_pool_size));
  }
  for (const auto& r : requests) {
    if (r.chain_length > limits.max_chain_length) {
      throw std::invalid_argument("brute_force_optimal: chain length " + std::to_string(r.chain_length) +
                                  " exceeds the limit of " + std::to_string(limits.max_chain_length));
    }
  }
  Search s{env, requests, prefs, env.config().violation_penalty, {}, {}};
  s.best.total_cost = std::numeric_limits<double>::infinity();
  s.descend(initial, 0, 0.0);
  return s.best;
}

}  // namespace qoeslice::policy
