#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qoeslice/env/types.hpp"
#include "qoeslice/intent/embedder.hpp"
#include "qoeslice/intent/intent_store.hpp"
#include "qoeslice/intent/llm_client.hpp"
#include "qoeslice/intent/prompt.hpp"
#include "qoeslice/qoe/preference_source.hpp"

namespace qoeslice::intent {

struct InferenceConfig {
  std::size_t k = 4;
  double aging_lambda = 0.002;
  int attempts = 2;  // first try plus one retry
  std::array<qoe::PreferenceVector, 3> class_defaults{{
      {0.45, 0.45, 0.10},
      {0.35, 0.30, 0.35},
      {0.15, 0.15, 0.70},
  }};

  const qoe::PreferenceVector& class_default(env::QoEClassId c) const { return class_defaults[env::index_of(c)]; }
};

void to_json(nlohmann::json& j, const InferenceConfig& cfg);
void from_json(const nlohmann::json& j, InferenceConfig& cfg);

struct Inference {
  qoe::PreferenceVector prefs;
  std::vector<ScoredEntry> exemplars;
  Prompt prompt;
  std::string raw_response;  // last response seen
  std::string error;         // last parse or transport error
  int attempts = 0;
  bool fell_back = false;
};

// embed -> retrieve -> prompt -> complete -> parse, retrying once and then
// falling back to the class default. Always returns a simplex vector.
class IntentInference {
 public:
  IntentInference(const Embedder& embedder, LlmClient& client, InferenceConfig cfg = {});

  // `store` must not be mutated concurrently; the memory bank's read lock
  // provides that.
  Inference infer(const env::SliceRequest& request, const IntentStore& store) const;

  std::size_t failures() const { return failures_.load(); }
  const InferenceConfig& config() const { return cfg_; }
  const Embedder& embedder() const { return embedder_; }

 private:
  const Embedder& embedder_;
  LlmClient& client_;
  InferenceConfig cfg_;
  mutable std::atomic<std::size_t> failures_{0};
};

qoe::PreferenceVector infer_preferences(const env::SliceRequest& request, const IntentStore& store,
                                        LlmClient& client, std::size_t k);

}  // namespace qoeslice::intent
