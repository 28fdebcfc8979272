#pragma once

#include <chrono>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "saekit/errors.hpp"

namespace saekit {

struct LlmClientConfig {
  std::string endpoint_url;   // e.g. https://host/v1/chat/completions
  std::string model_name;
  std::string auth_token_env_var_name;  // bearer token read from this env var
  double timeout_s = 60.0;
  int max_retries = 3;
  double backoff_base_s = 0.25;  // doubles per retry
  int max_tokens = 1024;
  bool mock_mode = false;  // serve canned responses, never touch the network
  std::vector<std::string> mock_responses;
};

struct TransportRequest {
  std::string url;
  std::string bearer_token;  // empty = no auth header
  std::string body;          // JSON
  double timeout_s = 60.0;
};

struct TransportResult {
  bool transport_ok = false;  // false = connection-level failure
  int status = 0;
  std::string body;
  std::string error;  // transport failure detail
};

using Transport = std::function<TransportResult(const TransportRequest&)>;

// Single-turn chat-completion client (OpenAI-compatible request/response
// shape; see the repository README for the documented JSON bodies).
// Transient failures (connection errors, 429, 5xx) are retried with
// exponential backoff; other statuses fail immediately. The HTTP transport
// is injected (llm_http.hpp provides the real one); mock_mode never touches
// a transport at all.
class LlmClient {
 public:
  explicit LlmClient(LlmClientConfig cfg, Transport transport = {})
      : cfg_(std::move(cfg)), transport_(std::move(transport)) {
    if (cfg_.max_retries < 0) throw ConfigError("max_retries must be >= 0");
    if (!cfg_.mock_mode && !transport_)
      throw ConfigError("llm client needs a transport unless mock_mode is set");
  }

  // system may be empty, in which case only the user message is sent.
  std::string complete(const std::string& system, const std::string& user) {
    if (cfg_.mock_mode) {
      if (next_mock_ >= cfg_.mock_responses.size())
        throw ConfigError("mock_mode: ran out of canned responses");
      return cfg_.mock_responses[next_mock_++];
    }
    nlohmann::json messages = nlohmann::json::array();
    if (!system.empty()) messages.push_back({{"role", "system"}, {"content", system}});
    messages.push_back({{"role", "user"}, {"content", user}});
    nlohmann::json body = {
        {"model", cfg_.model_name},
        {"messages", messages},
        {"max_tokens", cfg_.max_tokens},
    };
    TransportRequest req;
    req.url = cfg_.endpoint_url;
    req.body = body.dump();
    req.timeout_s = cfg_.timeout_s;
    if (!cfg_.auth_token_env_var_name.empty()) {
      const char* token = std::getenv(cfg_.auth_token_env_var_name.c_str());
      if (!token)
        throw ConfigError("auth env var " + cfg_.auth_token_env_var_name + " is not set");
      req.bearer_token = token;
    }

    TransportResult last;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) {
        const double delay = cfg_.backoff_base_s * static_cast<double>(1 << (attempt - 1));
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      }
      last = transport_(req);
      if (last.transport_ok && last.status >= 200 && last.status < 300)
        return extract_content(last.body);
      const bool transient = !last.transport_ok || last.status == 429 || last.status >= 500;
      if (!transient) break;
    }
    if (!last.transport_ok)
      throw NetworkError("request failed after retries: " + last.error);
    throw NetworkError("endpoint returned status " + std::to_string(last.status) +
                       " after retries");
  }

  size_t mock_responses_consumed() const { return next_mock_; }

 private:
  static std::string extract_content(const std::string& body) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("response body is not JSON: ") + e.what());
    }
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
      throw ParseError("response body is missing field: choices");
    const auto& choice = j["choices"][0];
    if (!choice.contains("message")) throw ParseError("response body is missing field: choices[0].message");
    const auto& message = choice["message"];
    if (!message.contains("content")) throw ParseError("response body is missing field: choices[0].message.content");
    return message.at("content").get<std::string>();
  }

  LlmClientConfig cfg_;
  Transport transport_;
  size_t next_mock_ = 0;
};

}  // namespace saekit
