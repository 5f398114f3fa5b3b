#pragma once

#include "crn/synthworld/image.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

enum class AgentRole { visual_concept, linguistic, verifier, system1 };

std::string_view to_string(AgentRole role);
/// Throws ConfigError for unknown names.
AgentRole role_from_string(std::string_view s);

struct AgentEndpoint {
  /// "http(s)://host[:port][/prefix]", "oracle:<world-dir>" or "transcript:<file>".
  std::string base_url;
  std::string model;
  AgentRole role = AgentRole::linguistic;
  double temperature = 0.0;
  int max_tokens = 256;
  bool request_logprobs = false;
  int top_alternatives = 0;
};

/// Yes/no roles (verifier, system1) get logprobs with 5 alternatives.
AgentEndpoint make_endpoint(AgentRole role, std::string base_url, std::string model = {});
AgentEndpoint with_temperature(AgentEndpoint ep, double temperature);
/// Throws ConfigError: negative temperature, verifier without alternatives.
void validate(const AgentEndpoint& ep);

/// The user turn of a request.
struct Stimulus {
  std::string text;
  std::optional<std::filesystem::path> image{};
  std::shared_ptr<const SynthImage> synth{};
  /// Distinguishes repeated samples of the same request (exploration rounds,
  /// k-sample entailment). Not transmitted; part of cache and oracle keys.
  unsigned sample_index = 0;
};

/// "" for text-only, "synth:<id>" or "file:<sha256>" otherwise.
std::string stimulus_digest(const Stimulus& s);

struct TokenAlternative {
  std::string token;
  double logprob = 0.0;
};

struct AgentReply {
  std::string text;
  std::vector<TokenAlternative> first_token_alternatives;
};

}  // namespace crn
