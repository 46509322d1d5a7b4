#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "qoeslice/bench/bench_config.hpp"
#include "qoeslice/intent/embedder.hpp"
#include "qoeslice/intent/intent_inference.hpp"
#include "qoeslice/intent/llm_client.hpp"
#include "qoeslice/memory/memory_bank.hpp"
#include "qoeslice/memory/rag_preferences.hpp"

namespace qoeslice::bench {

enum class StoreInit {
  Empty,      // zero-shot until something is logged
  Bootstrap,  // shipped seed records
};

// Embedder, client, memory bank and inference wired together.
class IntentStack {
 public:
  // `client_kind` is "mock" or "remote". When `snapshot` is given the bank is
  // loaded from it, otherwise initialised per `init`.
  IntentStack(const BenchConfig& cfg, const std::string& client_kind, StoreInit init = StoreInit::Bootstrap,
              const std::optional<std::filesystem::path>& snapshot = std::nullopt);
  IntentStack(const IntentStack&) = delete;
  IntentStack& operator=(const IntentStack&) = delete;

  intent::HashingEmbedder& embedder() { return embedder_; }
  intent::LlmClient& client() { return *client_; }
  memory::MemoryBank& bank() { return bank_; }
  intent::IntentInference& inference() { return inference_; }
  memory::RagPreferences& preferences() { return prefs_; }

 private:
  intent::HashingEmbedder embedder_;
  std::unique_ptr<intent::LlmClient> client_;
  memory::MemoryBank bank_;
  intent::IntentInference inference_;
  memory::RagPreferences prefs_;
};

}  // namespace qoeslice::bench
