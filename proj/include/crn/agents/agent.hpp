#pragma once

#include "crn/agents/endpoint.hpp"
#include "crn/util/json_io.hpp"

#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace crn {

/// A chat agent. Implementations must be safe to call concurrently.
class Agent {
public:
  virtual ~Agent() = default;

  /// Validates the endpoint, delegates, then enforces that a reply carries
  /// first-token alternatives whenever they were requested (MalformedReply).
  AgentReply complete(const AgentEndpoint& endpoint, std::string_view system_text,
                      const Stimulus& stimulus);

private:
  virtual AgentReply do_complete(const AgentEndpoint& endpoint, std::string_view system_text,
                                 const Stimulus& stimulus) = 0;
};

/// An agent plus the endpoint descriptor used to address it.
struct RoleBinding {
  std::shared_ptr<Agent> agent;
  AgentEndpoint endpoint;

  AgentReply ask(std::string_view system_text, const Stimulus& stimulus) const {
    return agent->complete(endpoint, system_text, stimulus);
  }
};

/// Wraps a callable; used for scripted mocks.
class FunctionAgent final : public Agent {
public:
  using Fn = std::function<AgentReply(const AgentEndpoint&, std::string_view, const Stimulus&)>;
  explicit FunctionAgent(Fn fn) : fn_(std::move(fn)) {}

private:
  AgentReply do_complete(const AgentEndpoint& ep, std::string_view sys, const Stimulus& s) override {
    return fn_(ep, sys, s);
  }
  Fn fn_;
};

/// Counts calls that reach the wrapped agent, per role.
class CountingAgent final : public Agent {
public:
  explicit CountingAgent(std::shared_ptr<Agent> inner) : inner_(std::move(inner)) {}

  std::size_t calls() const { return total_.load(); }
  std::size_t calls(AgentRole role) const;

private:
  AgentReply do_complete(const AgentEndpoint& ep, std::string_view sys, const Stimulus& s) override;

  std::shared_ptr<Agent> inner_;
  std::atomic<std::size_t> total_{0};
  std::array<std::atomic<std::size_t>, 4> per_role_{};
};

json reply_to_json(const AgentReply& reply);
AgentReply reply_from_json(const json& doc);

}  // namespace crn
