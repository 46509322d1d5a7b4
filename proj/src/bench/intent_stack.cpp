#include "qoeslice/bench/intent_stack.hpp"

namespace qoeslice::bench {

IntentStack::IntentStack(const BenchConfig& cfg, const std::string& client_kind, StoreInit init,
                         const std::optional<std::filesystem::path>& snapshot)
    : client_(intent::make_client(client_kind)),
      bank_(embedder_, cfg.memory),
      inference_(embedder_, *client_, cfg.intent),
      prefs_(bank_, inference_) {
  if (snapshot) {
    bank_.load(*snapshot);
  } else if (init == StoreInit::Bootstrap) {
    bank_.bootstrap(memory::default_seed_records());
  }
}

}  // namespace qoeslice::bench
