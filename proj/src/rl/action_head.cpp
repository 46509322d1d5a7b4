#include "qoeslice/rl/action_head.hpp"

#include <algorithm>

namespace qoeslice::rl {

using env::PlacementMode;

ActionMask build_mask(const env::SlicingEnv& env, const env::NetworkState& state, const env::SliceRequest& request) {
  ActionMask mask;
  mask.chain_length = request.chain_length;
  const auto pool = state.nodes.size();
  const auto local = env.eligible_nodes(state, request, env::Host::Local);
  const auto cloud = env.eligible_nodes(state, request, env::Host::Cloud);
  const auto k = static_cast<std::size_t>(request.chain_length);
  for (int m = 0; m < kModeLogits; ++m) {
    const auto mode = static_cast<PlacementMode>(m);
    const auto& nodes = env::host_for(mode) == env::Host::Cloud ? cloud : local;
    auto& flags = mask.node_ok[static_cast<std::size_t>(m)];
    flags.assign(pool, 0);
    for (int id : nodes) flags[static_cast<std::size_t>(id)] = 1;
    mask.mode_ok[static_cast<std::size_t>(m)] = nodes.size() >= k && env.mode_resources_ok(state, request, mode);
  }
  if (mask.mode_ok[static_cast<std::size_t>(PlacementMode::VerticalLocal)]) {
    mask.vertical_container = env.roomiest_container(state, request);
  }
  return mask;
}

env::DeploymentAction to_deployment(const ActionChoice& choice, const ActionMask& mask) {
  if (choice.is_infeasible()) return env::DeploymentAction::infeasible();
  env::DeploymentAction a;
  a.mode = static_cast<PlacementMode>(choice.mode);
  a.node_ids = choice.nodes;
  if (a.mode == PlacementMode::VerticalLocal) a.target_container = mask.vertical_container;
  return a;
}

ChoiceMaskView view_for(const ActionMask& mask, const ActionChoice& choice) {
  ChoiceMaskView v;
  v.mode_ok = mask.mode_ok;
  v.chain_length = mask.chain_length;
  const auto& flags = mask.node_ok[static_cast<std::size_t>(std::max(choice.mode, 0))];
  v.node_ok = flags.data();
  v.pool_size = static_cast<int>(flags.size());
  return v;
}

namespace {

int pick(const float* z, const std::vector<int>& candidates, ActMode mode, Rng& rng) {
  if (mode == ActMode::Greedy) {
    int best = candidates.front();
    for (int c : candidates) {
      if (z[c] > z[best]) best = c;
    }
    return best;
  }
  float zmax = z[candidates.front()];
  for (int c : candidates) zmax = std::max(zmax, z[c]);
  double total = 0.0;
  for (int c : candidates) total += std::exp(static_cast<double>(z[c] - zmax));
  double u = rng.uniform01() * total;
  for (int c : candidates) {
    u -= std::exp(static_cast<double>(z[c] - zmax));
    if (u < 0.0) return c;
  }
  return candidates.back();
}

}  // namespace

ActionChoice select_action(const float* logits, const ActionMask& mask, ActMode mode, Rng& rng) {
  ActionChoice choice;
  if (!mask.any()) return choice;
  std::vector<int> modes;
  for (int m = 0; m < kModeLogits; ++m) {
    if (mask.mode_ok[static_cast<std::size_t>(m)]) modes.push_back(m);
  }
  choice.mode = pick(logits, modes, mode, rng);

  const auto& flags = mask.node_ok[static_cast<std::size_t>(choice.mode)];
  const float* node_z = logits + kModeLogits;
  std::vector<std::uint8_t> taken(flags.size(), 0);
  std::vector<int> candidates;
  for (int j = 0; j < mask.chain_length; ++j) {
    candidates.clear();
    for (std::size_t n = 0; n < flags.size(); ++n) {
      if (flags[n] && !taken[n]) candidates.push_back(static_cast<int>(n));
    }
    if (static_cast<int>(candidates.size()) <= mask.chain_length - j) {
      // Forced completion, canonical ascending order.
      choice.nodes.insert(choice.nodes.end(), candidates.begin(), candidates.end());
      break;
    }
    const int n = pick(node_z, candidates, mode, rng);
    choice.nodes.push_back(n);
    taken[static_cast<std::size_t>(n)] = 1;
  }
  return choice;
}

}  // namespace qoeslice::rl
