#include "qoeslice/intent/intent_store.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qoeslice::intent {

std::uint64_t IntentStore::insert(IntentEntry entry) {
  if (entry.id == 0) entry.id = next_id_;
  next_id_ = std::max(next_id_, entry.id + 1);
  advance_to(entry.timestamp);
  entries_.push_back(std::move(entry));
  touch();
  return entries_.back().id;
}

IntentEntry* IntentStore::find(std::uint64_t id) {
  for (auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const IntentEntry* IntentStore::find(std::uint64_t id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

double age_weight(std::uint64_t now, std::uint64_t timestamp, double lambda) {
  const double age = now > timestamp ? static_cast<double>(now - timestamp) : 0.0;
  return std::exp(-lambda * age);
}

std::vector<ScoredEntry> retrieve_topk(const IntentStore& store, const Embedding& query, std::size_t k,
                                       std::uint64_t now, double lambda) {
  if (k == 0) throw std::invalid_argument("retrieve_topk: k must be at least 1");
  if (lambda < 0.0) throw std::invalid_argument("retrieve_topk: lambda must be non-negative");
  struct Ranked {
    std::size_t index;
    double score;
    double cosine;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(store.size());
  const auto& entries = store.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double c = cosine(query, entries[i].embedding);
    ranked.push_back({i, c * age_weight(now, entries[i].timestamp, lambda), c});
  }
  const std::size_t take = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end(),
                    [&](const Ranked& a, const Ranked& b) {
                      if (a.score != b.score) return a.score > b.score;
                      const auto& ea = entries[a.index];
                      const auto& eb = entries[b.index];
                      if (ea.timestamp != eb.timestamp) return ea.timestamp > eb.timestamp;
                      return ea.id < eb.id;
                    });
  std::vector<ScoredEntry> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({entries[ranked[i].index], ranked[i].score, ranked[i].cosine});
  return out;
}

}  // namespace qoeslice::intent
