#include "qoeslice/intent/llm_client.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "qoeslice/common/errors.hpp"

namespace qoeslice::intent {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct KeywordRule {
  std::array<std::string_view, 2> keywords;
  std::string_view answer;
};

constexpr std::array<KeywordRule, 4> kRules{{
    {{"safety", "control"}, "[0.3, 0.5, 0.2]"},
    {{"latency", "real-time"}, "[0.55, 0.30, 0.15]"},
    {{"budget", "cost"}, "[0.2, 0.2, 0.6]"},
    {{"video", "monitoring"}, "[0.4, 0.2, 0.4]"},
}};
constexpr std::string_view kNoMatch = "[0.34, 0.33, 0.33]";

}  // namespace

std::string MockLlmClient::query_line(std::string_view prompt) {
  const std::string_view marker = "Intent: ";
  std::size_t pos = std::string_view::npos;
  for (std::size_t at = prompt.find(marker); at != std::string_view::npos; at = prompt.find(marker, at + 1)) {
    if (at == 0 || prompt[at - 1] == '\n') pos = at;
  }
  if (pos == std::string_view::npos) return {};
  const auto start = pos + marker.size();
  const auto end = prompt.find('\n', start);
  return std::string(prompt.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
}

std::string MockLlmClient::complete(const std::string& prompt) {
  const std::string q = lower(query_line(prompt));
  for (const auto& rule : kRules) {
    for (const auto kw : rule.keywords) {
      if (q.find(kw) != std::string::npos) return std::string(rule.answer);
    }
  }
  return std::string(kNoMatch);
}

RemoteLlmClient::RemoteLlmClient(std::string endpoint, std::string api_key, std::chrono::milliseconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("LLM endpoint must include a scheme: " + endpoint);
  const auto path_start = endpoint.find('/', scheme_end + 3);
  base_ = endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (endpoint.rfind("https://", 0) == 0) {
    throw ConfigError("https endpoints need a build with QOESLICE_REMOTE_TLS=ON: " + endpoint);
  }
#endif
}

std::unique_ptr<RemoteLlmClient> RemoteLlmClient::from_environment() {
  const char* endpoint = std::getenv(kEndpointEnv);
  const char* key = std::getenv(kApiKeyEnv);
  if (endpoint == nullptr || *endpoint == '\0') {
    throw ConfigError(std::string("remote LLM client needs ") + kEndpointEnv + " to be set");
  }
  if (key == nullptr || *key == '\0') {
    throw ConfigError(std::string("remote LLM client needs ") + kApiKeyEnv + " to be set");
  }
  return std::make_unique<RemoteLlmClient>(endpoint, key);
}

std::string RemoteLlmClient::complete(const std::string& prompt) {
  httplib::Client cli(base_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());
  cli.set_bearer_token_auth(api_key_);

  const nlohmann::json body{{"prompt", prompt}};
  const auto res = cli.Post(path_, body.dump(), "application/json");
  if (!res) throw LlmError("LLM request to " + base_ + path_ + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw LlmError("LLM request to " + base_ + path_ + " returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

std::unique_ptr<LlmClient> make_client(const std::string& kind) {
  if (kind == "mock") return std::make_unique<MockLlmClient>();
  if (kind == "remote") return RemoteLlmClient::from_environment();
  throw ConfigError("unknown LLM client '" + kind + "' (expected mock or remote)");
}

}  // namespace qoeslice::intent
