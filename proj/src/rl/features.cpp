#include "qoeslice/rl/features.hpp"

#include <algorithm>

namespace qoeslice::rl {

namespace {

float unit(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

}  // namespace

void encode_state_into(const env::NetworkState& state, const env::SliceRequest& request,
                       const qoe::PreferenceVector& prefs, const env::EnvConfig& cfg, float* out) {
  std::size_t i = 0;
  out[i++] = unit(static_cast<double>(state.local_cpu_free) / cfg.local_cpu);
  out[i++] = unit(static_cast<double>(state.local_mem_free) / cfg.local_mem);
  out[i++] = unit(request.cpu / 6.0);
  out[i++] = unit(request.mem / 6.0);
  out[i++] = unit(request.chain_length / 3.0);
  for (const env::QoEClassId id : env::kAllClasses) out[i++] = request.qoe_class == id ? 1.0f : 0.0f;
  const double delay_scale = std::max(cfg.node_delay_range.max, 1);
  const double cost_scale = std::max(cfg.node_cost_range.max, 1);
  const double share_scale = cfg.max_share_bound();
  for (const auto& n : state.nodes) {
    out[i++] = unit(n.node_delay_ms / delay_scale);
    out[i++] = unit(n.deploy_cost / cost_scale);
    out[i++] = unit(n.tenant_count() / share_scale);
    out[i++] = n.host == env::Host::Cloud ? 1.0f : 0.0f;
  }
  out[i++] = unit(prefs.latency);
  out[i++] = unit(prefs.reliability);
  out[i++] = unit(prefs.econ);
}

std::vector<float> encode_state(const env::NetworkState& state, const env::SliceRequest& request,
                                const qoe::PreferenceVector& prefs, const env::EnvConfig& cfg) {
  std::vector<float> out(static_cast<std::size_t>(feature_dim(static_cast<int>(state.nodes.size()))));
  encode_state_into(state, request, prefs, cfg, out.data());
  return out;
}

}  // namespace qoeslice::rl
