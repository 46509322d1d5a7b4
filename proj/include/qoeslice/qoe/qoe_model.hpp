#pragma once

#include <span>
#include <vector>

#include "qoeslice/env/config.hpp"
#include "qoeslice/env/types.hpp"
#include "qoeslice/qoe/preference.hpp"

namespace qoeslice::qoe {

struct QoEMetrics {
  double latency_ms = 0.0;
  double econ_cost = 0.0;
  double reliability_cost = 0.0;  // shared-node count
  int chain_length = 1;
  // Normalized to comparable scales: latency/150, cost/40, shared/chain.
  double norm_latency = 0.0;
  double norm_cost = 0.0;
  double norm_reliability = 0.0;
};

QoEMetrics make_metrics(double latency_ms, double econ_cost, double reliability_cost, int chain_length,
                        const env::EnvConfig& cfg);
QoEMetrics metrics_of(const env::DeploymentOutcome& outcome, const env::EnvConfig& cfg);

// Boot delay (horizontal only) + deployment delay of nodes not yet deployed
// + offload delay (cloud only). `before` is the state prior to the action.
double latency_ms(const env::DeploymentAction& action, const env::NetworkState& before,
                  const env::EnvConfig& cfg);

// Server fee for the mode + deploy cost of nodes not yet deployed.
double econ_cost(const env::DeploymentAction& action, const env::NetworkState& before,
                 const env::EnvConfig& cfg);

// Number of the slice's own nodes with >= 2 tenants. Throws NotFoundError.
int reliability_cost(const env::NetworkState& after, env::SliceId slice);

// J = w_lat * L + w_econ * C + w_rel * R. Throws std::invalid_argument off the simplex.
double weighted_cost(const QoEMetrics& metrics, const PreferenceVector& prefs);

std::vector<env::Violation> check_constraints(const QoEMetrics& metrics, const env::NetworkState& after,
                                              env::SliceId slice, const env::EnvConfig& cfg);

// True iff every node of `slice` holds at most the class's max_share tenants.
bool sharing_within_bound(const env::NetworkState& state, env::SliceId slice, const env::EnvConfig& cfg);

// Outcomes of all active slices with Reliability re-checked on the final
// topology, ordered by slice id.
std::vector<env::DeploymentOutcome> audit_reliability(const env::NetworkState& state,
                                                      const env::EnvConfig& cfg);

double availability_ratio(std::span<const env::DeploymentOutcome> outcomes);

double reward(const QoEMetrics& metrics, const PreferenceVector& prefs,
              std::span<const env::Violation> violations, double penalty = 1.0);

}  // namespace qoeslice::qoe
