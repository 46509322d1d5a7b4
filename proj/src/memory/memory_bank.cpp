#include "qoeslice/memory/memory_bank.hpp"

#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "qoeslice/common/errors.hpp"
#include "qoeslice/data/embedded_data.hpp"

namespace qoeslice::memory {

using nlohmann::json;

void to_json(json& j, const MemoryConfig& cfg) { j = json{{"tau", cfg.tau}, {"aging_lambda", cfg.aging_lambda}}; }

void from_json(const json& j, MemoryConfig& cfg) {
  for (const auto& [key, value] : j.items()) {
    if (key == "tau") {
      cfg.tau = value.get<double>();
    } else if (key == "aging_lambda") {
      cfg.aging_lambda = value.get<double>();
    } else {
      throw ConfigError("unknown memory config key: " + key);
    }
  }
  if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) throw ConfigError("memory.tau must be in (0, 1]");
  if (cfg.aging_lambda < 0.0) throw ConfigError("memory.aging_lambda must be non-negative");
}

namespace {

void merge_into(IntentEntry& target, const IntentEntry& candidate) {
  const double wa = target.merge_count;
  const double wb = candidate.merge_count;
  const double total = wa + wb;

  auto& p = target.preference;
  const auto& q = candidate.preference;
  p = {(wa * p.latency + wb * q.latency) / total, (wa * p.reliability + wb * q.reliability) / total,
       (wa * p.econ + wb * q.econ) / total};
  const double s = p.sum();
  p = {p.latency / s, p.reliability / s, p.econ / s};

  double sq = 0.0;
  for (std::size_t i = 0; i < target.embedding.size(); ++i) {
    target.embedding[i] = (wa * target.embedding[i] + wb * candidate.embedding[i]) / total;
    sq += target.embedding[i] * target.embedding[i];
  }
  const double n = std::sqrt(sq);
  if (n > 0.0) {
    for (double& x : target.embedding) x /= n;
  }

  if (candidate.outcome) {
    if (!target.outcome) {
      target.outcome = candidate.outcome;
    } else {
      auto& a = *target.outcome;
      const auto& b = *candidate.outcome;
      const double na = static_cast<double>(a.samples);
      const double nb = static_cast<double>(b.samples);
      const double nt = na + nb;
      if (nt > 0.0) {
        a.latency_ms = (na * a.latency_ms + nb * b.latency_ms) / nt;
        a.econ_cost = (na * a.econ_cost + nb * b.econ_cost) / nt;
        a.reliability_cost = (na * a.reliability_cost + nb * b.reliability_cost) / nt;
        a.served_fraction = (na * a.served_fraction + nb * b.served_fraction) / nt;
      }
      a.samples += b.samples;
    }
  }
  target.timestamp = std::max(target.timestamp, candidate.timestamp);
  target.merge_count += candidate.merge_count;
}

}  // namespace

GateResult redundancy_gate(IntentStore& store, IntentEntry candidate, double tau) {
  const IntentEntry* best = nullptr;
  double best_cos = -2.0;
  for (const auto& e : store.entries()) {
    const double c = intent::cosine(candidate.embedding, e.embedding);
    if (c > best_cos) {
      best_cos = c;
      best = &e;
    }
  }
  if (best != nullptr && best_cos >= tau) {
    IntentEntry* target = store.find(best->id);
    merge_into(*target, candidate);
    store.advance_to(candidate.timestamp);
    store.touch();
    return {GateKind::Merged, target->id};
  }
  candidate.id = 0;
  return {GateKind::Inserted, store.insert(std::move(candidate))};
}

std::vector<double> age_weights(const IntentStore& store, std::uint64_t now, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("age_weights: lambda must be non-negative");
  std::vector<double> out;
  out.reserve(store.size());
  for (const auto& e : store.entries()) out.push_back(intent::age_weight(now, e.timestamp, lambda));
  return out;
}

OutcomeSummary summarize(const qoe::QoEMetrics& metrics, bool served) {
  return {metrics.latency_ms, metrics.econ_cost, metrics.reliability_cost, served ? 1.0 : 0.0, 1};
}

IntentEntry log_outcome(IntentStore& store, const intent::Embedder& embedder, std::string_view intent_text,
                        const qoe::PreferenceVector& preference, const std::optional<OutcomeSummary>& outcome,
                        std::uint64_t timestamp, double tau) {
  if (!preference.on_simplex()) throw std::invalid_argument("log_outcome: preference is not on the simplex");
  IntentEntry candidate;
  candidate.intent_text = std::string(intent_text);
  candidate.embedding = embedder.embed(intent_text);
  candidate.preference = preference;
  candidate.timestamp = timestamp;
  candidate.outcome = outcome;
  const auto gate = redundancy_gate(store, std::move(candidate), tau);
  return *store.find(gate.entry_id);
}

BootstrapSummary bootstrap(IntentStore& store, const intent::Embedder& embedder, std::span<const SeedRecord> seeds,
                           double tau) {
  BootstrapSummary summary;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& s = seeds[i];
    try {
      const auto before = store.size();
      log_outcome(store, embedder, s.intent_text, s.preference, std::nullopt, 0, tau);
      if (store.size() > before) {
        ++summary.inserted;
      } else {
        ++summary.merged;
      }
    } catch (const std::invalid_argument& e) {
      summary.skipped.push_back("record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return summary;
}

std::vector<SeedRecord> parse_seed_records(std::string_view jsonl) {
  std::vector<SeedRecord> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      SeedRecord r;
      r.intent_text = j.at("intent_text").get<std::string>();
      const auto w = j.at("preference").get<std::vector<double>>();
      if (w.size() != 3) throw LoadError("seed preference must have 3 weights", line_no);
      r.preference = {w[0], w[1], w[2]};
      if (j.contains("qoe_class")) r.qoe_class = env::class_from_string(j["qoe_class"].get<std::string>());
      out.push_back(std::move(r));
    } catch (const LoadError&) {
      throw;
    } catch (const std::exception& e) {
      throw LoadError("seed records line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  return out;
}

std::vector<SeedRecord> load_seed_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open seed records: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_seed_records(ss.str());
}

const std::vector<SeedRecord>& default_seed_records() {
  static const std::vector<SeedRecord> records = parse_seed_records(data::kSeedIntentsJsonl);
  return records;
}

void write_snapshot(const IntentStore& store, std::ostream& out) {
  for (const auto& e : store.entries()) {
    json j{{"version", kSnapshotVersion},
           {"id", e.id},
           {"intent_text", e.intent_text},
           {"embedding", e.embedding},
           {"preference", e.preference.as_array()},
           {"timestamp", e.timestamp},
           {"merge_count", e.merge_count}};
    if (e.outcome) {
      const auto& o = *e.outcome;
      j["outcome"] = {{"latency_ms", o.latency_ms},
                      {"econ_cost", o.econ_cost},
                      {"reliability_cost", o.reliability_cost},
                      {"served_fraction", o.served_fraction},
                      {"samples", o.samples}};
    }
    out << j.dump() << '\n';
  }
}

IntentStore read_snapshot(std::istream& in) {
  IntentStore store;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) -> LoadError {
    return LoadError("snapshot line " + std::to_string(line_no) + ": " + why, line_no);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw fail(std::string("corrupt record: ") + e.what());
    }
    try {
      const int version = j.at("version").get<int>();
      if (version != kSnapshotVersion) {
        throw fail("unsupported snapshot version " + std::to_string(version) + " (expected " +
                   std::to_string(kSnapshotVersion) + ")");
      }
      IntentEntry e;
      e.id = j.at("id").get<std::uint64_t>();
      e.intent_text = j.at("intent_text").get<std::string>();
      e.embedding = j.at("embedding").get<std::vector<double>>();
      const auto w = j.at("preference").get<std::vector<double>>();
      if (w.size() != 3) throw fail("preference must have 3 weights");
      e.preference = {w[0], w[1], w[2]};
      e.timestamp = j.at("timestamp").get<std::uint64_t>();
      e.merge_count = j.at("merge_count").get<int>();
      if (j.contains("outcome")) {
        const auto& o = j["outcome"];
        e.outcome = OutcomeSummary{o.at("latency_ms").get<double>(), o.at("econ_cost").get<double>(),
                                   o.at("reliability_cost").get<double>(), o.at("served_fraction").get<double>(),
                                   o.at("samples").get<std::size_t>()};
      }
      if (e.id == 0 || e.merge_count < 1) throw fail("id and merge_count must be positive");
      if (std::abs(intent::norm(e.embedding) - 1.0) > 1e-6) throw fail("embedding is not unit norm");
      if (!e.preference.on_simplex()) throw fail("preference is not on the simplex");
      if (store.find(e.id) != nullptr) throw fail("duplicate entry id " + std::to_string(e.id));
      store.insert(std::move(e));
    } catch (const LoadError&) {
      throw;
    } catch (const std::exception& ex) {
      throw fail(std::string("bad record: ") + ex.what());
    }
  }
  return store;
}

void save_snapshot(const IntentStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write snapshot: " + path.string());
  write_snapshot(store, out);
  if (!out) throw std::runtime_error("error writing snapshot: " + path.string());
}

IntentStore load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("snapshot not found: " + path.string());
  return read_snapshot(in);
}

MemoryBank::MemoryBank(const intent::Embedder& embedder, MemoryConfig cfg) : embedder_(embedder), cfg_(cfg) {}

IntentEntry MemoryBank::log_outcome(std::string_view intent_text, const qoe::PreferenceVector& preference,
                                    const std::optional<OutcomeSummary>& outcome) {
  std::unique_lock lock(mu_);
  return memory::log_outcome(store_, embedder_, intent_text, preference, outcome, store_.now() + 1, cfg_.tau);
}

IntentEntry MemoryBank::log_outcome_at(std::string_view intent_text, const qoe::PreferenceVector& preference,
                                       const std::optional<OutcomeSummary>& outcome, std::uint64_t timestamp) {
  std::unique_lock lock(mu_);
  return memory::log_outcome(store_, embedder_, intent_text, preference, outcome, timestamp, cfg_.tau);
}

BootstrapSummary MemoryBank::bootstrap(std::span<const SeedRecord> seeds) {
  std::unique_lock lock(mu_);
  return memory::bootstrap(store_, embedder_, seeds, cfg_.tau);
}

IntentStore MemoryBank::copy() const {
  std::shared_lock lock(mu_);
  return store_;
}

void MemoryBank::replace(IntentStore store) {
  std::unique_lock lock(mu_);
  store_ = std::move(store);
  store_.touch();
}

std::size_t MemoryBank::size() const {
  std::shared_lock lock(mu_);
  return store_.size();
}

std::uint64_t MemoryBank::now() const {
  std::shared_lock lock(mu_);
  return store_.now();
}

std::uint64_t MemoryBank::revision() const {
  std::shared_lock lock(mu_);
  return store_.revision();
}

std::vector<double> MemoryBank::age_weights() const {
  std::shared_lock lock(mu_);
  return memory::age_weights(store_, store_.now(), cfg_.aging_lambda);
}

void MemoryBank::save(const std::filesystem::path& path) const {
  std::shared_lock lock(mu_);
  save_snapshot(store_, path);
}

void MemoryBank::load(const std::filesystem::path& path) { replace(load_snapshot(path)); }

}  // namespace qoeslice::memory
