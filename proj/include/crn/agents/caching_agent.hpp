#pragma once

#include "crn/agents/agent.hpp"

#include <filesystem>
#include <optional>
#include <shared_mutex>

namespace crn {

/// Directory of replies, one JSON file per key. Concurrent readers,
/// serialized writers; writes land atomically via rename.
class ResponseCache {
public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<AgentReply> get(const std::string& key) const;
  void put(const std::string& key, const AgentReply& reply);

  /// Hash of (endpoint URL, model, temperature, token settings, system and
  /// prompt text, stimulus digest, sample index).
  static std::string key_for(const AgentEndpoint& ep, std::string_view system_text, const Stimulus& stimulus);

private:
  std::filesystem::path path_for(const std::string& key) const;

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
};

class CachingAgent final : public Agent {
public:
  CachingAgent(std::shared_ptr<Agent> inner, std::shared_ptr<ResponseCache> cache)
      : inner_(std::move(inner)), cache_(std::move(cache)) {}

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }

private:
  AgentReply do_complete(const AgentEndpoint& ep, std::string_view system_text,
                         const Stimulus& stimulus) override;

  std::shared_ptr<Agent> inner_;
  std::shared_ptr<ResponseCache> cache_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

}  // namespace crn
