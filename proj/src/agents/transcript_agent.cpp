#include "crn/agents/transcript_agent.hpp"

#include "crn/errors.hpp"

namespace crn {

TranscriptAgent TranscriptAgent::from_json(const json& doc) {
  std::vector<Entry> entries;
  const auto& list = require_array(doc, "entries", "");
  for (std::size_t i = 0; i < list.size(); ++i) {
    std::string path = "entries[" + std::to_string(i) + "]";
    const auto& e = list[i];
    Entry entry;
    try {
      entry.role = role_from_string(require_string(e, "role", path));
    } catch (const ConfigError& err) {
      throw SchemaError(path + ".role: " + err.what());
    }
    entry.prompt = require_string(e, "prompt", path);
    if (e.contains("stimulus")) entry.stimulus = require_string(e, "stimulus", path);
    if (e.contains("sample_index")) entry.sample_index = static_cast<unsigned>(require_number(e, "sample_index", path));
    entry.reply = reply_from_json(require_field(e, "reply", path));
    entries.push_back(std::move(entry));
  }
  return TranscriptAgent(std::move(entries));
}

std::shared_ptr<TranscriptAgent> TranscriptAgent::load(const std::filesystem::path& path) {
  return std::make_shared<TranscriptAgent>(from_json(read_json_file(path)));
}

AgentReply TranscriptAgent::do_complete(const AgentEndpoint& ep, std::string_view,
                                        const Stimulus& stimulus) {
  std::optional<std::string> digest;
  for (const auto& e : entries_) {
    if (e.role != ep.role || e.prompt != stimulus.text) continue;
    if (e.sample_index && *e.sample_index != stimulus.sample_index) continue;
    if (e.stimulus) {
      if (!digest) digest = stimulus.synth ? "synth:" + stimulus.synth->id
                            : stimulus.image ? stimulus.image->string()
                                             : std::string();
      if (*e.stimulus != *digest) continue;
    }
    return e.reply;
  }
  throw MalformedRequest("no transcript entry for " + std::string(to_string(ep.role)) + " prompt \"" +
                         stimulus.text + "\"");
}

}  // namespace crn
