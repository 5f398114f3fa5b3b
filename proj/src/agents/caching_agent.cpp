#include "crn/agents/caching_agent.hpp"

#include "crn/errors.hpp"
#include "crn/util/hash.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

namespace crn {

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<AgentReply> ResponseCache::get(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto p = path_for(key);
  if (!std::filesystem::exists(p)) return std::nullopt;
  try {
    return reply_from_json(read_json_file(p));
  } catch (const SchemaError&) {
    return std::nullopt;  // torn or foreign file: treat as a miss
  }
}

void ResponseCache::put(const std::string& key, const AgentReply& reply) {
  std::unique_lock lock(mutex_);
  static std::atomic<unsigned> counter{0};
  auto p = path_for(key);
  std::filesystem::create_directories(p.parent_path());
  auto tmp = p;
  tmp += ".tmp" + std::to_string(counter++);
  write_json_file(tmp, reply_to_json(reply));
  std::filesystem::rename(tmp, p);
}

std::string ResponseCache::key_for(const AgentEndpoint& ep, std::string_view system_text,
                                   const Stimulus& stimulus) {
  json k = {{"endpoint", ep.base_url},
            {"model", ep.model},
            {"role", std::string(to_string(ep.role))},
            {"temperature", ep.temperature},
            {"max_tokens", ep.max_tokens},
            {"logprobs", ep.request_logprobs},
            {"top_logprobs", ep.top_alternatives},
            {"prompt", sha256_hex(std::string(system_text) + '\x1f' + stimulus.text)},
            {"stimulus", sha256_hex(stimulus_digest(stimulus))},
            {"sample_index", stimulus.sample_index}};
  return sha256_hex(k.dump());
}

AgentReply CachingAgent::do_complete(const AgentEndpoint& ep, std::string_view system_text,
                                     const Stimulus& stimulus) {
  auto key = ResponseCache::key_for(ep, system_text, stimulus);
  if (auto hit = cache_->get(key)) {
    ++hits_;
    return *hit;
  }
  ++misses_;
  auto reply = inner_->complete(ep, system_text, stimulus);
  cache_->put(key, reply);
  return reply;
}

}  // namespace crn
