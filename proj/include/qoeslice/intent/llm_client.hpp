#pragma once

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qoeslice::intent {

// Transport or service failure while completing a prompt.
class LlmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string name() const = 0;
  // Raw completion text for a prompt. Throws LlmError on transport failure.
  virtual std::string complete(const std::string& prompt) = 0;
};

// Deterministic offline stand-in. Looks only at the final "Intent:" line of
// the prompt and answers from a fixed keyword table.
class MockLlmClient final : public LlmClient {
 public:
  std::string name() const override { return "mock"; }
  std::string complete(const std::string& prompt) override;

  static std::string query_line(std::string_view prompt);
};

inline constexpr const char* kEndpointEnv = "QOESLICE_LLM_ENDPOINT";
inline constexpr const char* kApiKeyEnv = "QOESLICE_LLM_API_KEY";

// POSTs {"prompt": ...} as JSON with a bearer token. The response body is
// returned verbatim; the preference parser finds the weights inside it.
class RemoteLlmClient final : public LlmClient {
 public:
  RemoteLlmClient(std::string endpoint, std::string api_key,
                  std::chrono::milliseconds timeout = std::chrono::seconds(10));

  // Reads the endpoint and key from the environment. Throws ConfigError when
  // either is unset or empty.
  static std::unique_ptr<RemoteLlmClient> from_environment();

  std::string name() const override { return "remote"; }
  std::string complete(const std::string& prompt) override;

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

// "mock" or "remote".
std::unique_ptr<LlmClient> make_client(const std::string& kind);

}  // namespace qoeslice::intent
