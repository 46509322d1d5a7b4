#pragma once

#include <initializer_list>
#include <string>
#include <utility>

#include "qoeslice/env/slicing_env.hpp"

namespace qoeslice::testing {

inline env::SliceRequest request(std::uint64_t id, env::QoEClassId cls, int cpu, int mem, int chain,
                                 std::string text = "test intent") {
  env::SliceRequest r;
  r.id = env::SliceId{id};
  r.qoe_class = cls;
  r.cpu = cpu;
  r.mem = mem;
  r.chain_length = chain;
  r.intent_text = std::move(text);
  r.arrival_index = static_cast<std::size_t>(id);
  return r;
}

// Overwrites node delays and costs so arithmetic in tests is explicit.
inline void set_nodes(env::NetworkState& s, std::initializer_list<std::pair<int, int>> delay_cost) {
  std::size_t i = 0;
  for (const auto& [d, c] : delay_cost) {
    s.nodes.at(i).node_delay_ms = d;
    s.nodes.at(i).deploy_cost = c;
    ++i;
  }
}

inline env::DeploymentAction action(env::PlacementMode mode, std::vector<int> nodes,
                                    std::optional<int> container = std::nullopt) {
  return {mode, std::move(nodes), container};
}

}  // namespace qoeslice::testing
