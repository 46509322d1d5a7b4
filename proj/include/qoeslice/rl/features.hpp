#pragma once

#include <vector>

#include "qoeslice/env/config.hpp"
#include "qoeslice/env/types.hpp"
#include "qoeslice/qoe/preference.hpp"

namespace qoeslice::rl {

// Observation layout:
//   [cpu_free/40, mem_free/30, req cpu/6, req mem/6, chain/3, one-hot class (3),
//    per node (delay/15, deploy_cost/4, tenants/4, is_cloud) x pool_size, prefs (3)]
// Every entry is clamped into [0, 1].
constexpr int feature_dim(int pool_size) { return 11 + 4 * pool_size; }

// Pass PreferenceVector::zero() for the preference-blind variant.
std::vector<float> encode_state(const env::NetworkState& state, const env::SliceRequest& request,
                                const qoe::PreferenceVector& prefs, const env::EnvConfig& cfg);

// Writes into an existing buffer of feature_dim(pool_size) floats.
void encode_state_into(const env::NetworkState& state, const env::SliceRequest& request,
                       const qoe::PreferenceVector& prefs, const env::EnvConfig& cfg, float* out);

}  // namespace qoeslice::rl
