#pragma once

#include "crn/agents/agent.hpp"

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

namespace crn {

struct HttpOptions {
  std::string api_key;  // sent as "Authorization: Bearer <key>" when non-empty
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds connect_timeout{10000};
  std::chrono::milliseconds read_timeout{120000};
  int max_in_flight = 8;
};

/// Client for OpenAI-compatible POST {base_url}/v1/chat/completions.
///
/// Retries connection failures, timeouts, 408, 429 and 5xx with exponential
/// backoff; other 4xx responses fail immediately.
class HttpChatAgent final : public Agent {
public:
  explicit HttpChatAgent(HttpOptions options = {});

  /// Reads CRN_API_KEY.
  static HttpOptions options_from_env();

private:
  AgentReply do_complete(const AgentEndpoint& ep, std::string_view system_text,
                         const Stimulus& stimulus) override;

  HttpOptions options_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

/// The request body sent for (endpoint, system, stimulus).
json build_chat_request(const AgentEndpoint& ep, std::string_view system_text, const Stimulus& stimulus);

/// Reads choices[0].message.content and choices[0].logprobs.content[0].top_logprobs.
/// Throws MalformedReply.
AgentReply parse_chat_response(const json& body);

}  // namespace crn
