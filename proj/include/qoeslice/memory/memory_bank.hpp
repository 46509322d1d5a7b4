#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qoeslice/env/types.hpp"
#include "qoeslice/intent/embedder.hpp"
#include "qoeslice/intent/intent_store.hpp"
#include "qoeslice/qoe/qoe_model.hpp"

namespace qoeslice::memory {

using intent::IntentEntry;
using intent::IntentStore;
using intent::OutcomeSummary;

struct MemoryConfig {
  double tau = 0.95;
  double aging_lambda = 0.002;
};

void to_json(nlohmann::json& j, const MemoryConfig& cfg);
void from_json(const nlohmann::json& j, MemoryConfig& cfg);

enum class GateKind { Inserted, Merged };

struct GateResult {
  GateKind kind = GateKind::Inserted;
  std::uint64_t entry_id = 0;
};

// Merges `candidate` into its most similar entry when that cosine reaches
// tau, otherwise inserts it. Merging weights both sides by merge_count.
GateResult redundancy_gate(IntentStore& store, IntentEntry candidate, double tau = 0.95);

// Per-entry retrieval multipliers, in store order.
std::vector<double> age_weights(const IntentStore& store, std::uint64_t now, double lambda);

OutcomeSummary summarize(const qoe::QoEMetrics& metrics, bool served);

// Embeds, stamps and gates one observation; returns the stored or merged
// entry. Throws std::invalid_argument for empty text or a preference off the
// simplex.
IntentEntry log_outcome(IntentStore& store, const intent::Embedder& embedder, std::string_view intent_text,
                        const qoe::PreferenceVector& preference, const std::optional<OutcomeSummary>& outcome,
                        std::uint64_t timestamp, double tau = 0.95);

struct SeedRecord {
  std::string intent_text;
  qoe::PreferenceVector preference;
  std::optional<env::QoEClassId> qoe_class;
};

struct BootstrapSummary {
  std::size_t inserted = 0;
  std::size_t merged = 0;
  std::vector<std::string> skipped;  // one reason per rejected record
};

BootstrapSummary bootstrap(IntentStore& store, const intent::Embedder& embedder, std::span<const SeedRecord> seeds,
                           double tau = 0.95);

// JSONL with intent_text, preference and optional qoe_class per line. Blank
// lines are ignored. Throws LoadError naming the line on malformed JSON.
std::vector<SeedRecord> parse_seed_records(std::string_view jsonl);
std::vector<SeedRecord> load_seed_records(const std::filesystem::path& path);
const std::vector<SeedRecord>& default_seed_records();

inline constexpr int kSnapshotVersion = 1;

void write_snapshot(const IntentStore& store, std::ostream& out);
IntentStore read_snapshot(std::istream& in);
void save_snapshot(const IntentStore& store, const std::filesystem::path& path);
// Throws NotFoundError for a missing file and LoadError for bad records.
IntentStore load_snapshot(const std::filesystem::path& path);

// The store behind a reader/writer lock. Writers are serialised; readers run
// concurrently against a consistent store.
class MemoryBank {
 public:
  explicit MemoryBank(const intent::Embedder& embedder, MemoryConfig cfg = {});

  // Stamps the observation with the next event time.
  IntentEntry log_outcome(std::string_view intent_text, const qoe::PreferenceVector& preference,
                          const std::optional<OutcomeSummary>& outcome = std::nullopt);
  IntentEntry log_outcome_at(std::string_view intent_text, const qoe::PreferenceVector& preference,
                             const std::optional<OutcomeSummary>& outcome, std::uint64_t timestamp);
  BootstrapSummary bootstrap(std::span<const SeedRecord> seeds);

  template <typename F>
  decltype(auto) read(F&& f) const {
    std::shared_lock lock(mu_);
    return f(static_cast<const IntentStore&>(store_));
  }

  IntentStore copy() const;
  void replace(IntentStore store);
  std::size_t size() const;
  std::uint64_t now() const;
  std::uint64_t revision() const;
  std::vector<double> age_weights() const;

  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

  const MemoryConfig& config() const { return cfg_; }
  const intent::Embedder& embedder() const { return embedder_; }

 private:
  const intent::Embedder& embedder_;
  MemoryConfig cfg_;
  mutable std::shared_mutex mu_;
  IntentStore store_;
};

}  // namespace qoeslice::memory
