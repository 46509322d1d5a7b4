#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qoeslice/env/config.hpp"
#include "qoeslice/env/types.hpp"

namespace qoeslice::env {

struct StepResult {
  NetworkState state;
  DeploymentOutcome outcome;
  // Earlier slices whose sharing bound this step pushed over.
  std::vector<SliceId> collateral;
};

// Sequential VNF deployment over a CU local server, an unlimited cloud and a
// VNF node pool. The environment object only holds configuration; all state
// lives in NetworkState values, so instances are cheap to share read-only.
class SlicingEnv {
 public:
  // Throws ConfigError if the config is invalid.
  explicit SlicingEnv(EnvConfig cfg);

  const EnvConfig& config() const { return cfg_; }

  // Fresh local server and a node pool with delays and costs drawn from the
  // configured ranges. The first local_node_count() nodes are Local.
  NetworkState reset(std::uint64_t seed) const;

  // All resource- and share-feasible actions. Node sets are enumerated as
  // ascending combinations; any ordering of a listed set is also feasible.
  std::vector<DeploymentAction> feasible_actions(const NetworkState& state, const SliceRequest& request) const;
  bool is_feasible(const NetworkState& state, const SliceRequest& request, const DeploymentAction& action) const;

  // Nodes of `host` that can still take this request's class, ascending id.
  std::vector<int> eligible_nodes(const NetworkState& state, const SliceRequest& request, Host host) const;
  bool mode_resources_ok(const NetworkState& state, const SliceRequest& request, PlacementMode mode) const;
  bool container_fits(const NetworkState& state, const Container& c, const SliceRequest& request) const;
  // Container with the most growth headroom that still fits the request.
  std::optional<int> roomiest_container(const NetworkState& state, const SliceRequest& request) const;

  // Deploys `request`. Takes the state by value; pass an rvalue to avoid a copy.
  // Throws ContractViolation for an infeasible non-sentinel action.
  StepResult apply(NetworkState state, const SliceRequest& request, const DeploymentAction& action) const;

  // Tears a slice down. Nodes stay deployed (warm). Throws NotFoundError.
  NetworkState release(NetworkState state, SliceId slice) const;
  NetworkState release_all(NetworkState state) const;

  DeploymentOutcome infeasible_outcome(const SliceRequest& request) const;

 private:
  EnvConfig cfg_;
};

// Conservation and capacity invariants; returns false on any breach.
bool resources_conserved(const NetworkState& state, const EnvConfig& cfg);

// Invokes fn(combination) for every ascending k-subset of `items`.
template <typename Fn>
void for_each_combination(const std::vector<int>& items, std::size_t k, Fn&& fn) {
  const std::size_t n = items.size();
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<int> combo(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) combo[i] = items[idx[i]];
    fn(combo);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace qoeslice::env
