#pragma once

#include <array>
#include <string>

#include <json.hpp>

#include "qoeslice/env/types.hpp"

namespace qoeslice::env {

// Arrival probabilities per QoE class, indexed by QoEClassId.
struct ClassMix {
  std::array<double, kNumClasses> p = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

  double operator[](QoEClassId id) const { return p[index_of(id)]; }
  bool operator==(const ClassMix&) const = default;
};

struct EnvConfig {
  int pool_size = 12;
  double local_fraction = 0.5;
  int local_cpu = 40;
  int local_mem = 30;
  double boot_delay_ms = 30.0;
  double offload_delay_ms = 40.0;
  IntRange node_delay_range = {10, 15};
  IntRange node_cost_range = {2, 4};
  double local_server_cost = 30.0;
  double cloud_server_cost = 10.0;
  IntRange chain_length_range = {2, 3};
  // Per-container growth ceiling; bounds the slack available to vertical scaling.
  int container_cpu_cap = 16;
  int container_mem_cap = 12;

  // Normalizers of the weighted cost and the per-violation reward penalty.
  double latency_normalizer_ms = 150.0;
  double cost_normalizer = 40.0;
  double violation_penalty = 1.0;

  ClassMix class_mix;
  std::array<QoEClass, kNumClasses> classes = default_classes({2, 3});

  static std::array<QoEClass, kNumClasses> default_classes(IntRange chain_length);

  const QoEClass& qoe_class(QoEClassId id) const { return classes[index_of(id)]; }
  int local_node_count() const;
  int max_chain_length() const;
  int max_share_bound() const;

  // Throws ConfigError on any inconsistency.
  void validate() const;

  bool operator==(const EnvConfig&) const = default;
};

void to_json(nlohmann::json& j, const EnvConfig& cfg);
// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, EnvConfig& cfg);

EnvConfig load_env_config(const std::string& path);

// Stable fingerprint of a config, used to tag emitted tables.
std::string config_hash(const nlohmann::json& config);

}  // namespace qoeslice::env
