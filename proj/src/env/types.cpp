#include "qoeslice/env/types.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qoeslice::env {

std::string_view to_string(QoEClassId id) {
  switch (id) {
    case QoEClassId::HighPriority: return "HighPriority";
    case QoEClassId::MediumPriority: return "MediumPriority";
    case QoEClassId::BestEffort: return "BestEffort";
  }
  return "?";
}

QoEClassId class_from_string(std::string_view name) {
  for (const QoEClassId id : kAllClasses) {
    if (to_string(id) == name) return id;
  }
  throw std::invalid_argument("unknown QoE class: " + std::string(name));
}

std::string_view to_string(PlacementMode mode) {
  switch (mode) {
    case PlacementMode::VerticalLocal: return "VerticalLocal";
    case PlacementMode::HorizontalLocal: return "HorizontalLocal";
    case PlacementMode::CloudOffload: return "CloudOffload";
    case PlacementMode::Infeasible: return "Infeasible";
  }
  return "?";
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::Latency: return "Latency";
    case Violation::Reliability: return "Reliability";
    case Violation::Economics: return "Economics";
    case Violation::Infeasible: return "Infeasible";
  }
  return "?";
}

std::string describe(const DeploymentAction& action) {
  std::ostringstream os;
  os << to_string(action.mode);
  if (action.target_container) os << "(c" << *action.target_container << ")";
  os << "[";
  for (std::size_t i = 0; i < action.node_ids.size(); ++i) {
    if (i) os << ",";
    os << action.node_ids[i];
  }
  os << "]";
  return os.str();
}

bool DeploymentOutcome::has(Violation v) const {
  return std::find(violations.begin(), violations.end(), v) != violations.end();
}

void DeploymentOutcome::add(Violation v) {
  if (!has(v)) violations.push_back(v);
}

const Container* NetworkState::find_container(int container_id) const {
  for (const auto& c : containers) {
    if (c.container_id == container_id) return &c;
  }
  return nullptr;
}

Container* NetworkState::find_container(int container_id) {
  for (auto& c : containers) {
    if (c.container_id == container_id) return &c;
  }
  return nullptr;
}

}  // namespace qoeslice::env
