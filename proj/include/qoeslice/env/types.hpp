#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qoeslice::env {

enum class QoEClassId : std::uint8_t { HighPriority = 0, MediumPriority = 1, BestEffort = 2 };
inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<QoEClassId, kNumClasses> kAllClasses = {
    QoEClassId::HighPriority, QoEClassId::MediumPriority, QoEClassId::BestEffort};

constexpr std::size_t index_of(QoEClassId id) { return static_cast<std::size_t>(id); }
std::string_view to_string(QoEClassId id);
QoEClassId class_from_string(std::string_view name);

struct IntRange {
  int min = 0;
  int max = 0;

  bool contains(int v) const { return v >= min && v <= max; }
  bool valid() const { return min <= max; }
  bool operator==(const IntRange&) const = default;
};

struct QoEClass {
  QoEClassId id = QoEClassId::BestEffort;
  double latency_bound_ms = 0.0;
  int max_share = 1;  // slices per VNF node
  double cost_bound = 0.0;
  IntRange cpu_demand;
  IntRange mem_demand;
  IntRange chain_length;

  bool operator==(const QoEClass&) const = default;
};

struct SliceId {
  std::uint64_t value = 0;
  auto operator<=>(const SliceId&) const = default;
};

struct SliceRequest {
  SliceId id;
  QoEClassId qoe_class = QoEClassId::BestEffort;
  int cpu = 0;
  int mem = 0;
  int chain_length = 1;
  std::string intent_text;
  std::size_t arrival_index = 0;
};

enum class Host : std::uint8_t { Local, Cloud };

struct VnfNode {
  int node_id = 0;
  Host host = Host::Local;
  int node_delay_ms = 0;
  int deploy_cost = 0;
  bool deployed = false;
  std::vector<SliceId> tenants;

  int tenant_count() const { return static_cast<int>(tenants.size()); }
};

struct Container {
  int container_id = 0;
  int cpu_alloc = 0;
  int mem_alloc = 0;
  std::vector<SliceId> resident_slices;
};

enum class PlacementMode : std::uint8_t { VerticalLocal = 0, HorizontalLocal = 1, CloudOffload = 2, Infeasible = 3 };
inline constexpr std::size_t kNumPlacementModes = 3;  // excluding the sentinel
std::string_view to_string(PlacementMode mode);

constexpr Host host_for(PlacementMode mode) {
  return mode == PlacementMode::CloudOffload ? Host::Cloud : Host::Local;
}

struct DeploymentAction {
  PlacementMode mode = PlacementMode::Infeasible;
  std::vector<int> node_ids;  // chain order
  std::optional<int> target_container;  // set iff mode == VerticalLocal

  static DeploymentAction infeasible() { return {}; }
  bool is_infeasible() const { return mode == PlacementMode::Infeasible; }

  // Lexicographic encoding order: mode, container, node ids.
  auto operator<=>(const DeploymentAction&) const = default;
};

std::string describe(const DeploymentAction& action);

enum class Violation : std::uint8_t { Latency, Reliability, Economics, Infeasible };
std::string_view to_string(Violation v);

struct DeploymentOutcome {
  SliceId slice_id;
  QoEClassId qoe_class = QoEClassId::BestEffort;
  int chain_length = 1;
  double latency_ms = 0.0;
  double econ_cost = 0.0;
  int reliability_cost = 0;  // shared nodes among the slice's own nodes
  std::vector<Violation> violations;

  bool served() const { return violations.empty(); }
  bool has(Violation v) const;
  void add(Violation v);  // no duplicates
};

struct DeploymentRecord {
  SliceRequest request;
  DeploymentAction action;
  DeploymentOutcome outcome;  // as evaluated at deployment time
};

struct NetworkState {
  int local_cpu_free = 0;
  int local_mem_free = 0;
  std::vector<Container> containers;
  std::vector<VnfNode> nodes;
  std::map<SliceId, DeploymentRecord> active_slices;
  std::size_t step_index = 0;
  int next_container_id = 0;

  const Container* find_container(int container_id) const;
  Container* find_container(int container_id);
};

}  // namespace qoeslice::env
