#include "qoeslice/env/slicing_env.hpp"

#include <algorithm>
#include <set>

#include "qoeslice/common/errors.hpp"
#include "qoeslice/common/rng.hpp"
#include "qoeslice/qoe/qoe_model.hpp"

namespace qoeslice::env {

namespace {

bool contains(const std::vector<SliceId>& v, SliceId id) { return std::find(v.begin(), v.end(), id) != v.end(); }

void erase_id(std::vector<SliceId>& v, SliceId id) { v.erase(std::remove(v.begin(), v.end(), id), v.end()); }

}  // namespace

SlicingEnv::SlicingEnv(EnvConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

NetworkState SlicingEnv::reset(std::uint64_t seed) const {
  Rng rng(seed);
  NetworkState s;
  s.local_cpu_free = cfg_.local_cpu;
  s.local_mem_free = cfg_.local_mem;
  const int local_nodes = cfg_.local_node_count();
  s.nodes.reserve(static_cast<std::size_t>(cfg_.pool_size));
  for (int i = 0; i < cfg_.pool_size; ++i) {
    VnfNode n;
    n.node_id = i;
    n.host = i < local_nodes ? Host::Local : Host::Cloud;
    n.node_delay_ms = static_cast<int>(rng.uniform_int(cfg_.node_delay_range.min, cfg_.node_delay_range.max));
    n.deploy_cost = static_cast<int>(rng.uniform_int(cfg_.node_cost_range.min, cfg_.node_cost_range.max));
    s.nodes.push_back(std::move(n));
  }
  return s;
}

std::vector<int> SlicingEnv::eligible_nodes(const NetworkState& state, const SliceRequest& request, Host host) const {
  const int bound = cfg_.qoe_class(request.qoe_class).max_share;
  std::vector<int> out;
  for (const auto& n : state.nodes) {
    if (n.host == host && n.tenant_count() < bound) out.push_back(n.node_id);
  }
  return out;
}

bool SlicingEnv::container_fits(const NetworkState& state, const Container& c, const SliceRequest& request) const {
  const int cpu_slack = std::min(cfg_.container_cpu_cap - c.cpu_alloc, state.local_cpu_free);
  const int mem_slack = std::min(cfg_.container_mem_cap - c.mem_alloc, state.local_mem_free);
  return cpu_slack >= request.cpu && mem_slack >= request.mem;
}

std::optional<int> SlicingEnv::roomiest_container(const NetworkState& state, const SliceRequest& request) const {
  std::optional<int> best;
  int best_room = -1;
  for (const auto& c : state.containers) {
    if (!container_fits(state, c, request)) continue;
    const int room = (cfg_.container_cpu_cap - c.cpu_alloc) + (cfg_.container_mem_cap - c.mem_alloc);
    if (room > best_room) {
      best_room = room;
      best = c.container_id;
    }
  }
  return best;
}

bool SlicingEnv::mode_resources_ok(const NetworkState& state, const SliceRequest& request, PlacementMode mode) const {
  switch (mode) {
    case PlacementMode::VerticalLocal:
      return roomiest_container(state, request).has_value();
    case PlacementMode::HorizontalLocal:
      return state.local_cpu_free >= request.cpu && state.local_mem_free >= request.mem;
    case PlacementMode::CloudOffload:
      return true;
    case PlacementMode::Infeasible:
      return false;
  }
  return false;
}

std::vector<DeploymentAction> SlicingEnv::feasible_actions(const NetworkState& state,
                                                           const SliceRequest& request) const {
  std::vector<DeploymentAction> out;
  if (state.active_slices.count(request.id)) return out;
  const auto k = static_cast<std::size_t>(request.chain_length);

  const std::vector<int> local = eligible_nodes(state, request, Host::Local);
  if (local.size() >= k) {
    for (const auto& c : state.containers) {
      if (!container_fits(state, c, request)) continue;
      for_each_combination(local, k, [&](const std::vector<int>& combo) {
        out.push_back({PlacementMode::VerticalLocal, combo, c.container_id});
      });
    }
    if (mode_resources_ok(state, request, PlacementMode::HorizontalLocal)) {
      for_each_combination(local, k, [&](const std::vector<int>& combo) {
        out.push_back({PlacementMode::HorizontalLocal, combo, std::nullopt});
      });
    }
  }
  const std::vector<int> cloud = eligible_nodes(state, request, Host::Cloud);
  for_each_combination(cloud, k, [&](const std::vector<int>& combo) {
    out.push_back({PlacementMode::CloudOffload, combo, std::nullopt});
  });
  return out;
}

bool SlicingEnv::is_feasible(const NetworkState& state, const SliceRequest& request,
                             const DeploymentAction& action) const {
  if (action.is_infeasible()) return false;
  if (state.active_slices.count(request.id)) return false;
  if (static_cast<int>(action.node_ids.size()) != request.chain_length) return false;
  if ((action.mode == PlacementMode::VerticalLocal) != action.target_container.has_value()) return false;

  const int bound = cfg_.qoe_class(request.qoe_class).max_share;
  const Host host = host_for(action.mode);
  std::set<int> seen;
  for (const int id : action.node_ids) {
    if (id < 0 || id >= static_cast<int>(state.nodes.size())) return false;
    if (!seen.insert(id).second) return false;
    const auto& n = state.nodes[static_cast<std::size_t>(id)];
    if (n.host != host || n.tenant_count() >= bound) return false;
  }
  if (action.mode == PlacementMode::VerticalLocal) {
    const Container* c = state.find_container(*action.target_container);
    return c != nullptr && container_fits(state, *c, request);
  }
  return mode_resources_ok(state, request, action.mode);
}

DeploymentOutcome SlicingEnv::infeasible_outcome(const SliceRequest& request) const {
  const QoEClass& cls = cfg_.qoe_class(request.qoe_class);
  DeploymentOutcome o;
  o.slice_id = request.id;
  o.qoe_class = request.qoe_class;
  o.chain_length = request.chain_length;
  o.latency_ms = cls.latency_bound_ms + 1.0;
  o.econ_cost = cls.cost_bound + 1.0;
  // Worst case on every axis.
  o.reliability_cost = request.chain_length;
  o.violations = {Violation::Infeasible};
  return o;
}

StepResult SlicingEnv::apply(NetworkState state, const SliceRequest& request, const DeploymentAction& action) const {
  if (action.is_infeasible()) {
    ++state.step_index;
    DeploymentOutcome o = infeasible_outcome(request);
    return {std::move(state), std::move(o), {}};
  }
  if (!is_feasible(state, request, action)) {
    throw ContractViolation("apply: action " + describe(action) + " is not feasible for slice " +
                            std::to_string(request.id.value));
  }

  const double latency = qoe::latency_ms(action, state, cfg_);
  const double cost = qoe::econ_cost(action, state, cfg_);

  // Other tenants that were within their sharing bound before this step.
  std::vector<SliceId> neighbours;
  for (const int id : action.node_ids) {
    for (const SliceId t : state.nodes[static_cast<std::size_t>(id)].tenants) {
      if (!contains(neighbours, t)) neighbours.push_back(t);
    }
  }
  std::vector<SliceId> previously_ok;
  for (const SliceId t : neighbours) {
    if (qoe::sharing_within_bound(state, t, cfg_)) previously_ok.push_back(t);
  }

  std::optional<int> container_id;
  if (action.mode == PlacementMode::HorizontalLocal) {
    Container c;
    c.container_id = state.next_container_id++;
    c.cpu_alloc = request.cpu;
    c.mem_alloc = request.mem;
    c.resident_slices.push_back(request.id);
    state.containers.push_back(std::move(c));
    container_id = state.containers.back().container_id;
  } else if (action.mode == PlacementMode::VerticalLocal) {
    Container* c = state.find_container(*action.target_container);
    c->cpu_alloc += request.cpu;
    c->mem_alloc += request.mem;
    c->resident_slices.push_back(request.id);
    container_id = c->container_id;
  }
  if (container_id) {
    state.local_cpu_free -= request.cpu;
    state.local_mem_free -= request.mem;
  }

  for (const int id : action.node_ids) {
    auto& n = state.nodes[static_cast<std::size_t>(id)];
    n.deployed = true;
    n.tenants.push_back(request.id);
  }

  DeploymentRecord record;
  record.request = request;
  record.action = action;
  if (container_id) record.action.target_container = container_id;
  auto [it, inserted] = state.active_slices.emplace(request.id, std::move(record));
  (void)inserted;

  DeploymentOutcome o;
  o.slice_id = request.id;
  o.qoe_class = request.qoe_class;
  o.chain_length = request.chain_length;
  o.latency_ms = latency;
  o.econ_cost = cost;
  o.reliability_cost = qoe::reliability_cost(state, request.id);
  const qoe::QoEMetrics m = qoe::make_metrics(latency, cost, o.reliability_cost, request.chain_length, cfg_);
  o.violations = qoe::check_constraints(m, state, request.id, cfg_);
  it->second.outcome = o;

  std::vector<SliceId> collateral;
  for (const SliceId t : previously_ok) {
    if (!qoe::sharing_within_bound(state, t, cfg_)) collateral.push_back(t);
  }
  ++state.step_index;
  return {std::move(state), std::move(o), std::move(collateral)};
}

NetworkState SlicingEnv::release(NetworkState state, SliceId slice) const {
  const auto it = state.active_slices.find(slice);
  if (it == state.active_slices.end()) {
    throw NotFoundError("release: unknown slice " + std::to_string(slice.value));
  }
  const DeploymentRecord& record = it->second;
  for (const int id : record.action.node_ids) erase_id(state.nodes[static_cast<std::size_t>(id)].tenants, slice);
  if (record.action.target_container) {
    Container* c = state.find_container(*record.action.target_container);
    if (c == nullptr) throw ContractViolation("release: slice refers to a missing container");
    c->cpu_alloc -= record.request.cpu;
    c->mem_alloc -= record.request.mem;
    erase_id(c->resident_slices, slice);
    state.local_cpu_free += record.request.cpu;
    state.local_mem_free += record.request.mem;
    if (c->resident_slices.empty()) {
      const int cid = c->container_id;
      std::erase_if(state.containers, [cid](const Container& x) { return x.container_id == cid; });
    }
  }
  state.active_slices.erase(it);
  return state;
}

NetworkState SlicingEnv::release_all(NetworkState state) const {
  std::vector<SliceId> ids;
  ids.reserve(state.active_slices.size());
  for (const auto& [id, _] : state.active_slices) ids.push_back(id);
  for (const SliceId id : ids) state = release(std::move(state), id);
  return state;
}

bool resources_conserved(const NetworkState& state, const EnvConfig& cfg) {
  if (state.local_cpu_free < 0 || state.local_cpu_free > cfg.local_cpu) return false;
  if (state.local_mem_free < 0 || state.local_mem_free > cfg.local_mem) return false;
  int cpu = 0;
  int mem = 0;
  for (const auto& c : state.containers) {
    if (c.cpu_alloc > cfg.container_cpu_cap || c.mem_alloc > cfg.container_mem_cap) return false;
    cpu += c.cpu_alloc;
    mem += c.mem_alloc;
  }
  if (cpu + state.local_cpu_free != cfg.local_cpu || mem + state.local_mem_free != cfg.local_mem) return false;
  for (const auto& n : state.nodes) {
    if (!n.tenants.empty() && !n.deployed) return false;
    for (const SliceId t : n.tenants) {
      if (!state.active_slices.count(t)) return false;
    }
  }
  return true;
}

}  // namespace qoeslice::env
