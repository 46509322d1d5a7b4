#include "qoeslice/memory/rag_preferences.hpp"

namespace qoeslice::memory {

RagPreferences::RagPreferences(const MemoryBank& bank, const intent::IntentInference& inference)
    : bank_(bank), inference_(inference), cached_revision_(bank.revision()) {}

intent::Inference RagPreferences::infer(const env::SliceRequest& request) const {
  return bank_.read([&](const IntentStore& store) { return inference_.infer(request, store); });
}

qoe::PreferenceVector RagPreferences::preferences(const env::SliceRequest& request) {
  std::lock_guard lock(mu_);
  const auto rev = bank_.revision();
  if (rev != cached_revision_) {
    cache_.clear();
    cached_revision_ = rev;
  }
  // Fallbacks depend on the class, so they are keyed by it as well.
  const std::string key = std::string(env::to_string(request.qoe_class)) + '\n' + request.intent_text;
  if (const auto it = cache_.find(key); it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  const auto prefs = infer(request).prefs;
  cache_.emplace(key, prefs);
  return prefs;
}

}  // namespace qoeslice::memory
