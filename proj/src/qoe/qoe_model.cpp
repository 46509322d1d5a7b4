#include "qoeslice/qoe/qoe_model.hpp"

#include <algorithm>
#include <stdexcept>

#include "qoeslice/common/errors.hpp"

namespace qoeslice::qoe {

using env::DeploymentAction;
using env::DeploymentOutcome;
using env::NetworkState;
using env::PlacementMode;
using env::SliceId;
using env::Violation;

QoEMetrics make_metrics(double latency, double cost, double reliability, int chain_length,
                        const env::EnvConfig& cfg) {
  QoEMetrics m;
  m.latency_ms = latency;
  m.econ_cost = cost;
  m.reliability_cost = reliability;
  m.chain_length = std::max(chain_length, 1);
  m.norm_latency = latency / cfg.latency_normalizer_ms;
  m.norm_cost = cost / cfg.cost_normalizer;
  m.norm_reliability = reliability / m.chain_length;
  return m;
}

QoEMetrics metrics_of(const DeploymentOutcome& o, const env::EnvConfig& cfg) {
  return make_metrics(o.latency_ms, o.econ_cost, o.reliability_cost, o.chain_length, cfg);
}

double latency_ms(const DeploymentAction& action, const NetworkState& before, const env::EnvConfig& cfg) {
  double total = 0.0;
  if (action.mode == PlacementMode::HorizontalLocal) total += cfg.boot_delay_ms;
  if (action.mode == PlacementMode::CloudOffload) total += cfg.offload_delay_ms;
  for (const int id : action.node_ids) {
    const auto& node = before.nodes.at(static_cast<std::size_t>(id));
    if (!node.deployed) total += node.node_delay_ms;
  }
  return total;
}

double econ_cost(const DeploymentAction& action, const NetworkState& before, const env::EnvConfig& cfg) {
  double total = action.mode == PlacementMode::CloudOffload ? cfg.cloud_server_cost : cfg.local_server_cost;
  for (const int id : action.node_ids) {
    const auto& node = before.nodes.at(static_cast<std::size_t>(id));
    if (!node.deployed) total += node.deploy_cost;
  }
  return total;
}

int reliability_cost(const NetworkState& after, SliceId slice) {
  const auto it = after.active_slices.find(slice);
  if (it == after.active_slices.end()) {
    throw NotFoundError("reliability_cost: unknown slice " + std::to_string(slice.value));
  }
  int shared = 0;
  for (const int id : it->second.action.node_ids) {
    if (after.nodes.at(static_cast<std::size_t>(id)).tenant_count() >= 2) ++shared;
  }
  return shared;
}

double weighted_cost(const QoEMetrics& m, const PreferenceVector& prefs) {
  if (!prefs.on_simplex()) throw std::invalid_argument("weighted_cost: preference vector is off the simplex");
  return prefs.latency * m.norm_latency + prefs.econ * m.norm_cost + prefs.reliability * m.norm_reliability;
}

bool sharing_within_bound(const NetworkState& state, SliceId slice, const env::EnvConfig& cfg) {
  const auto it = state.active_slices.find(slice);
  if (it == state.active_slices.end()) return true;
  const int bound = cfg.qoe_class(it->second.request.qoe_class).max_share;
  for (const int id : it->second.action.node_ids) {
    if (state.nodes.at(static_cast<std::size_t>(id)).tenant_count() > bound) return false;
  }
  return true;
}

std::vector<Violation> check_constraints(const QoEMetrics& m, const NetworkState& after, SliceId slice,
                                         const env::EnvConfig& cfg) {
  const auto it = after.active_slices.find(slice);
  if (it == after.active_slices.end()) {
    throw NotFoundError("check_constraints: unknown slice " + std::to_string(slice.value));
  }
  const env::QoEClass& cls = cfg.qoe_class(it->second.request.qoe_class);
  std::vector<Violation> out;
  if (m.latency_ms > cls.latency_bound_ms) out.push_back(Violation::Latency);
  if (!sharing_within_bound(after, slice, cfg)) out.push_back(Violation::Reliability);
  if (m.econ_cost > cls.cost_bound) out.push_back(Violation::Economics);
  return out;
}

std::vector<DeploymentOutcome> audit_reliability(const NetworkState& state, const env::EnvConfig& cfg) {
  std::vector<DeploymentOutcome> out;
  out.reserve(state.active_slices.size());
  for (const auto& [id, record] : state.active_slices) {
    DeploymentOutcome o = record.outcome;
    if (!sharing_within_bound(state, id, cfg)) o.add(Violation::Reliability);
    out.push_back(std::move(o));
  }
  return out;
}

double availability_ratio(std::span<const DeploymentOutcome> outcomes) {
  if (outcomes.empty()) return 1.0;
  const auto served = std::count_if(outcomes.begin(), outcomes.end(),
                                    [](const DeploymentOutcome& o) { return o.served(); });
  return static_cast<double>(served) / static_cast<double>(outcomes.size());
}

double reward(const QoEMetrics& metrics, const PreferenceVector& prefs, std::span<const Violation> violations,
              double penalty) {
  return -weighted_cost(metrics, prefs) - penalty * static_cast<double>(violations.size());
}

}  // namespace qoeslice::qoe
