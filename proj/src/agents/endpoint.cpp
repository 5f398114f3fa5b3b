#include "crn/agents/endpoint.hpp"

#include "crn/errors.hpp"
#include "crn/util/hash.hpp"
#include "crn/util/json_io.hpp"

namespace crn {

std::string_view to_string(AgentRole role) {
  switch (role) {
    case AgentRole::visual_concept: return "visual_concept";
    case AgentRole::linguistic: return "linguistic";
    case AgentRole::verifier: return "verifier";
    case AgentRole::system1: return "system1";
  }
  return "linguistic";
}

AgentRole role_from_string(std::string_view s) {
  if (s == "visual_concept") return AgentRole::visual_concept;
  if (s == "linguistic") return AgentRole::linguistic;
  if (s == "verifier") return AgentRole::verifier;
  if (s == "system1") return AgentRole::system1;
  throw ConfigError("unknown agent role \"" + std::string(s) + "\"");
}

AgentEndpoint make_endpoint(AgentRole role, std::string base_url, std::string model) {
  AgentEndpoint ep;
  ep.base_url = std::move(base_url);
  ep.model = std::move(model);
  ep.role = role;
  if (role == AgentRole::verifier || role == AgentRole::system1) {
    ep.request_logprobs = true;
    ep.top_alternatives = 5;
    ep.max_tokens = 1;
  }
  return ep;
}

AgentEndpoint with_temperature(AgentEndpoint ep, double temperature) {
  ep.temperature = temperature;
  return ep;
}

void validate(const AgentEndpoint& ep) {
  if (!(ep.temperature >= 0.0)) throw ConfigError("endpoint temperature must be >= 0");
  if (ep.max_tokens < 1) throw ConfigError("endpoint max_tokens must be >= 1");
  if (ep.role == AgentRole::verifier && (!ep.request_logprobs || ep.top_alternatives < 1)) {
    throw ConfigError("verifier endpoints must request token alternatives");
  }
}

std::string stimulus_digest(const Stimulus& s) {
  if (s.synth) return "synth:" + s.synth->id;
  if (s.image) return "file:" + sha256_hex(read_text_file(*s.image));
  return "";
}

}  // namespace crn
