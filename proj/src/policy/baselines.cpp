#include "qoeslice/policy/baselines.hpp"

#include <algorithm>
#include <tuple>

namespace qoeslice::policy {

using env::DeploymentAction;
using env::Host;
using env::PlacementMode;

namespace {

int effective_delay(const env::VnfNode& n) { return n.deployed ? 0 : n.node_delay_ms; }

std::vector<int> lowest_delay(const env::NetworkState& state, std::vector<int> nodes, std::size_t k) {
  std::sort(nodes.begin(), nodes.end(), [&](int a, int b) {
    const auto& na = state.nodes[static_cast<std::size_t>(a)];
    const auto& nb = state.nodes[static_cast<std::size_t>(b)];
    return std::tuple(effective_delay(na), a) < std::tuple(effective_delay(nb), b);
  });
  nodes.resize(k);
  return nodes;
}

}  // namespace

DeploymentAction local_first(const env::SlicingEnv& env, const env::NetworkState& state,
                             const env::SliceRequest& request) {
  const auto k = static_cast<std::size_t>(request.chain_length);
  const auto local = env.eligible_nodes(state, request, Host::Local);
  if (local.size() >= k) {
    if (auto c = env.roomiest_container(state, request)) {
      return {PlacementMode::VerticalLocal, lowest_delay(state, local, k), c};
    }
    if (env.mode_resources_ok(state, request, PlacementMode::HorizontalLocal)) {
      return {PlacementMode::HorizontalLocal, lowest_delay(state, local, k), std::nullopt};
    }
  }
  const auto cloud = env.eligible_nodes(state, request, Host::Cloud);
  if (cloud.size() >= k) return {PlacementMode::CloudOffload, lowest_delay(state, cloud, k), std::nullopt};
  return DeploymentAction::infeasible();
}

DeploymentAction cloud_only(const env::SlicingEnv& env, const env::NetworkState& state,
                            const env::SliceRequest& request) {
  const auto k = static_cast<std::size_t>(request.chain_length);
  auto cloud = env.eligible_nodes(state, request, Host::Cloud);
  if (cloud.size() < k) return DeploymentAction::infeasible();
  std::sort(cloud.begin(), cloud.end(), [&](int a, int b) {
    const auto& na = state.nodes[static_cast<std::size_t>(a)];
    const auto& nb = state.nodes[static_cast<std::size_t>(b)];
    return std::tuple(!na.deployed, na.deploy_cost, a) < std::tuple(!nb.deployed, nb.deploy_cost, b);
  });
  cloud.resize(k);
  return {PlacementMode::CloudOffload, cloud, std::nullopt};
}

}  // namespace qoeslice::policy
