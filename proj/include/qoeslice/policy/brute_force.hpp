#pragma once

#include <span>
#include <vector>

#include "qoeslice/policy/policy.hpp"

namespace qoeslice::policy {

struct OracleLimits {
  std::size_t max_requests = 3;
  int max_chain_length = 2;
  int max_pool_size = 6;
};

struct OracleResult {
  std::vector<env::DeploymentAction> actions;
  double total_cost = 0.0;
  std::size_t sequences_explored = 0;
};

// Exhaustive search over every feasible action sequence, with declining (the
// Infeasible sentinel) allowed at every step, minimising the same
// episode cost run_episode reports. Ties resolve to the lexicographically
// smallest action sequence. Throws std::invalid_argument above the limits.
OracleResult brute_force_optimal(const env::SlicingEnv& env, const env::NetworkState& initial,
                                 std::span<const env::SliceRequest> requests,
                                 std::span<const qoe::PreferenceVector> prefs, const OracleLimits& limits = {});

}  // namespace qoeslice::policy
