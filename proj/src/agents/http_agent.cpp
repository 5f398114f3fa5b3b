#include "crn/agents/http_agent.hpp"

#include "crn/errors.hpp"
#include "crn/util/hash.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <thread>

namespace crn {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

SplitUrl split_url(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint URL lacks a scheme: " + url);
  auto slash = url.find('/', scheme + 3);
  SplitUrl out;
  out.origin = url.substr(0, slash);
  out.prefix = slash == std::string::npos ? "" : url.substr(slash);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

std::string image_mime(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  return "image/png";
}

bool transient(int status) { return status == 408 || status == 429 || status >= 500; }

class SlotGuard {
public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

private:
  std::counting_semaphore<>& s_;
};

}  // namespace

HttpChatAgent::HttpChatAgent(HttpOptions options)
    : options_(std::move(options)),
      slots_(std::make_unique<std::counting_semaphore<>>(std::max(1, options_.max_in_flight))) {}

HttpOptions HttpChatAgent::options_from_env() {
  HttpOptions o;
  if (const char* key = std::getenv("CRN_API_KEY")) o.api_key = key;
  return o;
}

json build_chat_request(const AgentEndpoint& ep, std::string_view system_text, const Stimulus& stimulus) {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", stimulus.text}});
  if (stimulus.image) {
    auto bytes = read_text_file(*stimulus.image);
    content.push_back({{"type", "image_url"},
                       {"image_url", {{"url", "data:" + image_mime(*stimulus.image) + ";base64," +
                                                  base64_encode(bytes)}}}});
  }
  json messages = json::array();
  if (!system_text.empty()) messages.push_back({{"role", "system"}, {"content", std::string(system_text)}});
  messages.push_back({{"role", "user"}, {"content", std::move(content)}});
  json body = {{"model", ep.model},
               {"messages", std::move(messages)},
               {"temperature", ep.temperature},
               {"max_tokens", ep.max_tokens},
               {"logprobs", ep.request_logprobs}};
  if (ep.request_logprobs) body["top_logprobs"] = ep.top_alternatives;
  return body;
}

AgentReply parse_chat_response(const json& body) {
  try {
    const auto& choice = body.at("choices").at(0);
    AgentReply reply;
    const auto& content = choice.at("message").at("content");
    reply.text = content.is_null() ? "" : content.get<std::string>();
    auto lp = choice.find("logprobs");
    if (lp != choice.end() && lp->is_object()) {
      auto tokens = lp->find("content");
      if (tokens != lp->end() && tokens->is_array() && !tokens->empty()) {
        for (const auto& alt : tokens->at(0).at("top_logprobs")) {
          reply.first_token_alternatives.push_back(
              {alt.at("token").get<std::string>(), alt.at("logprob").get<double>()});
        }
      }
    }
    return reply;
  } catch (const json::exception& e) {
    throw MalformedReply(std::string("unexpected chat completion shape: ") + e.what());
  }
}

AgentReply HttpChatAgent::do_complete(const AgentEndpoint& ep, std::string_view system_text,
                                      const Stimulus& stimulus) {
  auto url = split_url(ep.base_url);
  auto body = build_chat_request(ep, system_text, stimulus).dump();
  const std::string path = url.prefix + "/v1/chat/completions";

  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

  SlotGuard slot(*slots_);
  auto backoff = options_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    httplib::Client client(url.origin);
    client.set_connection_timeout(options_.connect_timeout);
    client.set_read_timeout(options_.read_timeout);
    auto res = client.Post(path, headers, body, "application/json");

    bool timed_out = false;
    int status = 0;
    std::string detail;
    if (!res) {
      timed_out = res.error() == httplib::Error::ConnectionTimeout;
      detail = httplib::to_string(res.error());
    } else if (res->status == 200) {
      json parsed;
      try {
        parsed = json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw MalformedReply(std::string("reply body is not JSON: ") + e.what());
      }
      return parse_chat_response(parsed);
    } else {
      status = res->status;
      detail = "HTTP " + std::to_string(status) + ": " + res->body.substr(0, 200);
      if (!transient(status)) throw TransportError(ep.base_url + ": " + detail, status);
    }

    if (attempt >= options_.max_retries) {
      if (timed_out) throw TimeoutError(ep.base_url + ": " + detail);
      throw TransportError(ep.base_url + ": " + detail + " after " + std::to_string(attempt + 1) + " attempts",
                           status);
    }
    spdlog::debug("retrying {} in {} ms ({})", ep.base_url, backoff.count(), detail);
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

}  // namespace crn
