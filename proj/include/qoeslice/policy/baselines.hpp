#pragma once

#include "qoeslice/policy/policy.hpp"

namespace qoeslice::policy {

// Vertical scaling into the roomiest container, else a new container, else
// the cloud. Nodes: lowest deployment delay first (deployed nodes add none),
// ties by node id. Ignores preferences.
env::DeploymentAction local_first(const env::SlicingEnv& env, const env::NetworkState& state,
                                  const env::SliceRequest& request);

// Always offloads. Nodes: already deployed first, then cheapest, then node id.
env::DeploymentAction cloud_only(const env::SlicingEnv& env, const env::NetworkState& state,
                                 const env::SliceRequest& request);

class LocalFirstPolicy final : public Policy {
 public:
  std::string name() const override { return "LocalFirst"; }
  env::DeploymentAction choose(const env::SlicingEnv& env, const env::NetworkState& state,
                               const env::SliceRequest& request, const qoe::PreferenceVector&) override {
    return local_first(env, state, request);
  }
};

class CloudOnlyPolicy final : public Policy {
 public:
  std::string name() const override { return "CloudOnly"; }
  env::DeploymentAction choose(const env::SlicingEnv& env, const env::NetworkState& state,
                               const env::SliceRequest& request, const qoe::PreferenceVector&) override {
    return cloud_only(env, state, request);
  }
};

}  // namespace qoeslice::policy
