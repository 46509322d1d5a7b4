#include "qoeslice/bench/bench_config.hpp"

#include <fstream>

#include "qoeslice/common/errors.hpp"

namespace qoeslice::bench {

using nlohmann::json;

json BenchConfig::to_json() const {
  json j;
  j["env"] = env;
  j["algo"] = algo;
  j["intent"] = intent;
  j["memory"] = memory;
  j["audit"] = {{"pool_size", audit.pool_size},
                {"chain_length", audit.chain_length},
                {"requests", audit.requests},
                {"instances", audit.instances}};
  j["bench"] = {{"request_counts", request_counts}, {"episodes_per_point", episodes_per_point}, {"seeds", seeds}};
  return j;
}

std::string BenchConfig::hash() const { return env::config_hash(to_json()); }

BenchConfig bench_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  BenchConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "env") {
        from_json(value, cfg.env);
      } else if (key == "algo") {
        from_json(value, cfg.algo);
      } else if (key == "intent") {
        from_json(value, cfg.intent);
      } else if (key == "memory") {
        from_json(value, cfg.memory);
      } else if (key == "audit") {
        for (const auto& [k, v] : value.items()) {
          if (k == "pool_size") cfg.audit.pool_size = v.get<int>();
          else if (k == "chain_length") cfg.audit.chain_length = v.get<int>();
          else if (k == "requests") cfg.audit.requests = v.get<int>();
          else if (k == "instances") cfg.audit.instances = v.get<int>();
          else throw ConfigError("unknown audit config key: " + k);
        }
      } else if (key == "bench") {
        for (const auto& [k, v] : value.items()) {
          if (k == "request_counts") cfg.request_counts = v.get<std::vector<int>>();
          else if (k == "episodes_per_point") cfg.episodes_per_point = v.get<int>();
          else if (k == "seeds") cfg.seeds = v.get<std::vector<std::uint64_t>>();
          else throw ConfigError("unknown bench config key: " + k);
        }
      } else {
        throw ConfigError("unknown config section: " + key);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.env.validate();
  for (int n : cfg.request_counts) {
    if (n < 1) throw ConfigError("bench.request_counts entries must be positive");
  }
  if (cfg.episodes_per_point < 1) throw ConfigError("bench.episodes_per_point must be at least 1");
  if (cfg.seeds.empty()) throw ConfigError("bench.seeds must not be empty");
  if (cfg.audit.instances < 0 || cfg.audit.requests < 1) throw ConfigError("audit settings out of range");
  return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  return bench_config_from_json(j);
}

}  // namespace qoeslice::bench
