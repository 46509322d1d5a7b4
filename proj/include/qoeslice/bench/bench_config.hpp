#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qoeslice/env/config.hpp"
#include "qoeslice/intent/intent_inference.hpp"
#include "qoeslice/memory/memory_bank.hpp"
#include "qoeslice/rl/trainer.hpp"

namespace qoeslice::bench {

// Settings for the brute-force audit instances. The defaults sit exactly at
// the oracle's guard.
struct AuditConfig {
  int pool_size = 6;
  int chain_length = 2;
  int requests = 3;
  int instances = 100;
};

struct BenchConfig {
  env::EnvConfig env;
  rl::AlgoConfig algo;
  intent::InferenceConfig intent;
  memory::MemoryConfig memory;
  AuditConfig audit;
  std::vector<int> request_counts{4, 8, 12, 16, 20};
  int episodes_per_point = 20;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

  nlohmann::json to_json() const;
  // FNV-1a of the canonical JSON dump; tags every emitted table.
  std::string hash() const;
};

// Sections: env, algo, intent, memory, audit, bench. Missing sections keep
// defaults; unknown keys raise ConfigError.
BenchConfig bench_config_from_json(const nlohmann::json& j);
BenchConfig load_bench_config(const std::string& path);

}  // namespace qoeslice::bench
