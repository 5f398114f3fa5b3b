#pragma once

#include "crn/agents/agent.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace crn {

/// Replays recorded replies, matched on (role, prompt, stimulus, sample index).
/// The stimulus key is "synth:<id>" or the image path as given.
/// Entries that omit the stimulus or sample index match any.
///
/// File format: {"entries": [{"role", "prompt", "stimulus"?, "sample_index"?,
///                            "reply": {"text", "top_logprobs": [{"token", "logprob"}]}}]}
class TranscriptAgent final : public Agent {
public:
  struct Entry {
    AgentRole role;
    std::string prompt;
    std::optional<std::string> stimulus;
    std::optional<unsigned> sample_index;
    AgentReply reply;
  };

  explicit TranscriptAgent(std::vector<Entry> entries) : entries_(std::move(entries)) {}
  static TranscriptAgent from_json(const json& doc);
  static std::shared_ptr<TranscriptAgent> load(const std::filesystem::path& path);

  const std::vector<Entry>& entries() const { return entries_; }

private:
  AgentReply do_complete(const AgentEndpoint& ep, std::string_view system_text,
                         const Stimulus& stimulus) override;

  std::vector<Entry> entries_;
};

}  // namespace crn
