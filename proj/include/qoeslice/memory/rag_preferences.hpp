#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>

#include "qoeslice/intent/intent_inference.hpp"
#include "qoeslice/memory/memory_bank.hpp"
#include "qoeslice/qoe/preference_source.hpp"

namespace qoeslice::memory {

// Preference source backed by retrieval over the memory bank. Results are
// cached per intent text until the bank changes.
class RagPreferences final : public qoe::PreferenceSource {
 public:
  RagPreferences(const MemoryBank& bank, const intent::IntentInference& inference);

  qoe::PreferenceVector preferences(const env::SliceRequest& request) override;
  intent::Inference infer(const env::SliceRequest& request) const;

  std::size_t cache_hits() const { return hits_; }
  std::size_t fallbacks() const { return inference_.failures(); }

 private:
  const MemoryBank& bank_;
  const intent::IntentInference& inference_;
  std::mutex mu_;
  std::uint64_t cached_revision_ = 0;
  std::unordered_map<std::string, qoe::PreferenceVector> cache_;
  std::size_t hits_ = 0;
};

}  // namespace qoeslice::memory
