#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qoeslice/intent/embedder.hpp"
#include "qoeslice/qoe/preference.hpp"

namespace qoeslice::intent {

// Aggregate of observed deployment outcomes behind an entry.
struct OutcomeSummary {
  double latency_ms = 0.0;
  double econ_cost = 0.0;
  double reliability_cost = 0.0;
  double served_fraction = 0.0;
  std::size_t samples = 0;

  bool operator==(const OutcomeSummary&) const = default;
};

struct IntentEntry {
  std::uint64_t id = 0;
  std::string intent_text;
  Embedding embedding;  // unit norm
  qoe::PreferenceVector preference;
  std::uint64_t timestamp = 0;  // event counter
  int merge_count = 1;
  std::optional<OutcomeSummary> outcome;

  bool operator==(const IntentEntry&) const = default;
};

// Flat exhaustive-scan vector store of <intent, preference> entries.
class IntentStore {
 public:
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<IntentEntry>& entries() const { return entries_; }

  // Assigns a fresh id unless the entry already carries one (snapshot load).
  std::uint64_t insert(IntentEntry entry);
  IntentEntry* find(std::uint64_t id);
  const IntentEntry* find(std::uint64_t id) const;

  // Latest event time seen; retrieval ages entries relative to it.
  std::uint64_t now() const { return now_; }
  void advance_to(std::uint64_t t) { now_ = std::max(now_, t); }

  // Bumped on every mutation so callers can invalidate derived caches.
  std::uint64_t revision() const { return revision_; }
  void touch() { ++revision_; }

 private:
  std::vector<IntentEntry> entries_;
  std::uint64_t next_id_ = 1;
  std::uint64_t now_ = 0;
  std::uint64_t revision_ = 0;
};

// exp(-lambda * (now - timestamp)); entries stamped in the future count as age 0.
double age_weight(std::uint64_t now, std::uint64_t timestamp, double lambda);

struct ScoredEntry {
  IntentEntry entry;
  double score = 0.0;   // cosine * age weight
  double cosine = 0.0;
};

// Exhaustive top-k by aged score, ties to the newer entry, then lower id.
// Returns min(k, size) entries; an empty store yields an empty list.
// Throws std::invalid_argument for k == 0.
std::vector<ScoredEntry> retrieve_topk(const IntentStore& store, const Embedding& query, std::size_t k,
                                       std::uint64_t now, double lambda);

}  // namespace qoeslice::intent
