#include "crn/agents/agent.hpp"

#include "crn/errors.hpp"

namespace crn {

AgentReply Agent::complete(const AgentEndpoint& endpoint, std::string_view system_text,
                           const Stimulus& stimulus) {
  validate(endpoint);
  AgentReply reply = do_complete(endpoint, system_text, stimulus);
  if (endpoint.request_logprobs && reply.first_token_alternatives.empty()) {
    throw MalformedReply("reply for " + std::string(to_string(endpoint.role)) +
                         " request carries no token alternatives");
  }
  return reply;
}

std::size_t CountingAgent::calls(AgentRole role) const {
  return per_role_[static_cast<std::size_t>(role)].load();
}

AgentReply CountingAgent::do_complete(const AgentEndpoint& ep, std::string_view sys,
                                      const Stimulus& s) {
  ++total_;
  ++per_role_[static_cast<std::size_t>(ep.role)];
  return inner_->complete(ep, sys, s);
}

json reply_to_json(const AgentReply& reply) {
  json alts = json::array();
  for (const auto& a : reply.first_token_alternatives) {
    alts.push_back({{"token", a.token}, {"logprob", a.logprob}});
  }
  return {{"text", reply.text}, {"top_logprobs", std::move(alts)}};
}

AgentReply reply_from_json(const json& doc) {
  AgentReply r;
  r.text = require_string(doc, "text", "reply");
  if (auto it = doc.find("top_logprobs"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) throw SchemaError("reply.top_logprobs: expected an array");
    for (const auto& a : *it) {
      r.first_token_alternatives.push_back(
          {require_string(a, "token", "reply.top_logprobs[]"),
           require_number(a, "logprob", "reply.top_logprobs[]")});
    }
  }
  return r;
}

}  // namespace crn
