#include "qoeslice/env/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "qoeslice/common/errors.hpp"
#include "qoeslice/common/hash.hpp"

namespace qoeslice::env {

using nlohmann::json;

std::array<QoEClass, kNumClasses> EnvConfig::default_classes(IntRange chain_length) {
  return {{
      {QoEClassId::HighPriority, 30.0, 1, 25.0, {2, 5}, {2, 4}, chain_length},
      {QoEClassId::MediumPriority, 100.0, 2, 25.0, {3, 6}, {3, 6}, chain_length},
      {QoEClassId::BestEffort, 150.0, 4, 40.0, {3, 6}, {3, 6}, chain_length},
  }};
}

int EnvConfig::local_node_count() const {
  return static_cast<int>(std::lround(pool_size * local_fraction));
}

int EnvConfig::max_chain_length() const {
  int m = 0;
  for (const auto& c : classes) m = std::max(m, c.chain_length.max);
  return m;
}

int EnvConfig::max_share_bound() const {
  int m = 0;
  for (const auto& c : classes) m = std::max(m, c.max_share);
  return m;
}

void EnvConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid EnvConfig: " + msg); };
  if (pool_size <= 0) fail("pool_size must be positive");
  if (local_fraction < 0.0 || local_fraction > 1.0) fail("local_fraction must lie in [0,1]");
  if (local_cpu <= 0 || local_mem <= 0) fail("local capacities must be positive");
  if (boot_delay_ms < 0 || offload_delay_ms < 0) fail("delays must be non-negative");
  if (!node_delay_range.valid() || node_delay_range.min < 0) fail("node_delay_range");
  if (!node_cost_range.valid() || node_cost_range.min < 0) fail("node_cost_range");
  if (!chain_length_range.valid() || chain_length_range.min < 1) fail("chain_length_range");
  if (container_cpu_cap <= 0 || container_mem_cap <= 0) fail("container caps must be positive");
  if (latency_normalizer_ms <= 0 || cost_normalizer <= 0) fail("normalizers must be positive");
  if (violation_penalty < 0) fail("violation_penalty must be non-negative");
  double mix_sum = 0.0;
  for (double p : class_mix.p) {
    if (p < 0.0) fail("class_mix entries must be non-negative");
    mix_sum += p;
  }
  if (std::abs(mix_sum - 1.0) > 1e-9) fail("class_mix must sum to 1");
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    const QoEClass& c = classes[i];
    if (index_of(c.id) != i) fail("class table out of order");
    if (c.max_share < 1) fail("max_share must be >= 1");
    if (!c.cpu_demand.valid() || c.cpu_demand.min <= 0) fail("cpu_demand_range");
    if (!c.mem_demand.valid() || c.mem_demand.min <= 0) fail("mem_demand_range");
    if (!c.chain_length.valid() || c.chain_length.min < 1) fail("class chain_length_range");
    if (c.cpu_demand.max > container_cpu_cap || c.mem_demand.max > container_mem_cap) {
      fail("a single request must fit an empty container");
    }
  }
  const int local_nodes = local_node_count();
  const int cloud_nodes = pool_size - local_nodes;
  if (pool_size < max_chain_length()) {
    fail("pool_size " + std::to_string(pool_size) + " < max chain length " +
         std::to_string(max_chain_length()));
  }
  if ((local_nodes > 0 && local_nodes < max_chain_length()) ||
      (cloud_nodes > 0 && cloud_nodes < max_chain_length())) {
    fail("each host partition must hold at least one full chain");
  }
}

namespace {

json range_json(IntRange r) { return json::array({r.min, r.max}); }

IntRange range_from(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(std::string("config key '") + key + "' must be a [min,max] pair");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

json class_json(const QoEClass& c) {
  return {{"latency_bound_ms", c.latency_bound_ms},
          {"max_share", c.max_share},
          {"cost_bound", c.cost_bound},
          {"cpu_demand_range", range_json(c.cpu_demand)},
          {"mem_demand_range", range_json(c.mem_demand)},
          {"chain_length_range", range_json(c.chain_length)}};
}

void class_from(const json& j, QoEClass& c) {
  static const std::set<std::string> known = {"latency_bound_ms",  "max_share",
                                              "cost_bound",        "cpu_demand_range",
                                              "mem_demand_range",  "chain_length_range"};
  for (const auto& [k, _] : j.items()) {
    if (!known.count(k)) throw ConfigError("unknown class key: " + k);
  }
  if (j.contains("latency_bound_ms")) c.latency_bound_ms = j["latency_bound_ms"].get<double>();
  if (j.contains("max_share")) c.max_share = j["max_share"].get<int>();
  if (j.contains("cost_bound")) c.cost_bound = j["cost_bound"].get<double>();
  if (j.contains("cpu_demand_range")) c.cpu_demand = range_from(j["cpu_demand_range"], "cpu_demand_range");
  if (j.contains("mem_demand_range")) c.mem_demand = range_from(j["mem_demand_range"], "mem_demand_range");
  if (j.contains("chain_length_range")) {
    c.chain_length = range_from(j["chain_length_range"], "chain_length_range");
  }
}

}  // namespace

void to_json(json& j, const EnvConfig& cfg) {
  json classes = json::object();
  for (const auto& c : cfg.classes) classes[std::string(to_string(c.id))] = class_json(c);
  j = json{{"pool_size", cfg.pool_size},
           {"local_fraction", cfg.local_fraction},
           {"local_cpu", cfg.local_cpu},
           {"local_mem", cfg.local_mem},
           {"boot_delay_ms", cfg.boot_delay_ms},
           {"offload_delay_ms", cfg.offload_delay_ms},
           {"node_delay_range", range_json(cfg.node_delay_range)},
           {"node_cost_range", range_json(cfg.node_cost_range)},
           {"local_server_cost", cfg.local_server_cost},
           {"cloud_server_cost", cfg.cloud_server_cost},
           {"chain_length_range", range_json(cfg.chain_length_range)},
           {"container_cpu_cap", cfg.container_cpu_cap},
           {"container_mem_cap", cfg.container_mem_cap},
           {"latency_normalizer_ms", cfg.latency_normalizer_ms},
           {"cost_normalizer", cfg.cost_normalizer},
           {"violation_penalty", cfg.violation_penalty},
           {"class_mix", json::array({cfg.class_mix.p[0], cfg.class_mix.p[1], cfg.class_mix.p[2]})},
           {"classes", classes}};
}

void from_json(const json& j, EnvConfig& cfg) {
  if (!j.is_object()) throw ConfigError("env config must be an object");
  static const std::set<std::string> known = {
      "pool_size",         "local_fraction",    "local_cpu",          "local_mem",
      "boot_delay_ms",     "offload_delay_ms",  "node_delay_range",   "node_cost_range",
      "local_server_cost", "cloud_server_cost", "chain_length_range", "container_cpu_cap",
      "container_mem_cap", "latency_normalizer_ms", "cost_normalizer", "violation_penalty",
      "class_mix",         "classes"};
  for (const auto& [k, _] : j.items()) {
    if (!known.count(k)) throw ConfigError("unknown env config key: " + k);
  }
  try {
    if (j.contains("pool_size")) cfg.pool_size = j["pool_size"].get<int>();
    if (j.contains("local_fraction")) cfg.local_fraction = j["local_fraction"].get<double>();
    if (j.contains("local_cpu")) cfg.local_cpu = j["local_cpu"].get<int>();
    if (j.contains("local_mem")) cfg.local_mem = j["local_mem"].get<int>();
    if (j.contains("boot_delay_ms")) cfg.boot_delay_ms = j["boot_delay_ms"].get<double>();
    if (j.contains("offload_delay_ms")) cfg.offload_delay_ms = j["offload_delay_ms"].get<double>();
    if (j.contains("node_delay_range")) cfg.node_delay_range = range_from(j["node_delay_range"], "node_delay_range");
    if (j.contains("node_cost_range")) cfg.node_cost_range = range_from(j["node_cost_range"], "node_cost_range");
    if (j.contains("local_server_cost")) cfg.local_server_cost = j["local_server_cost"].get<double>();
    if (j.contains("cloud_server_cost")) cfg.cloud_server_cost = j["cloud_server_cost"].get<double>();
    if (j.contains("chain_length_range")) {
      cfg.chain_length_range = range_from(j["chain_length_range"], "chain_length_range");
      for (auto& c : cfg.classes) c.chain_length = cfg.chain_length_range;
    }
    if (j.contains("container_cpu_cap")) cfg.container_cpu_cap = j["container_cpu_cap"].get<int>();
    if (j.contains("container_mem_cap")) cfg.container_mem_cap = j["container_mem_cap"].get<int>();
    if (j.contains("latency_normalizer_ms")) cfg.latency_normalizer_ms = j["latency_normalizer_ms"].get<double>();
    if (j.contains("cost_normalizer")) cfg.cost_normalizer = j["cost_normalizer"].get<double>();
    if (j.contains("violation_penalty")) cfg.violation_penalty = j["violation_penalty"].get<double>();
    if (j.contains("class_mix")) {
      const auto& m = j["class_mix"];
      if (!m.is_array() || m.size() != kNumClasses) throw ConfigError("class_mix must have 3 entries");
      for (std::size_t i = 0; i < kNumClasses; ++i) cfg.class_mix.p[i] = m[i].get<double>();
    }
    if (j.contains("classes")) {
      for (const auto& [name, body] : j["classes"].items()) {
        QoEClassId id;
        try {
          id = class_from_string(name);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
        class_from(body, cfg.classes[index_of(id)]);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed env config: ") + e.what());
  }
}

EnvConfig load_env_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  EnvConfig cfg;
  from_json(j.contains("env") ? j["env"] : j, cfg);
  cfg.validate();
  return cfg;
}

std::string config_hash(const json& config) { return to_hex(fnv1a64(config.dump())); }

}  // namespace qoeslice::env
