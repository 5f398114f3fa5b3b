#pragma once

#include "crn/agents/endpoint.hpp"
#include "crn/pipeline/config.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>

namespace crn {

/// Everything a command needs besides its own artifact paths.
struct RunConfig {
  std::string preset = "default";
  PipelineConfig pipeline;
  /// Base URL per role: "http(s)://...", "oracle:<world-dir>" or "transcript:<file>".
  std::map<AgentRole, std::string> endpoints;
  std::map<AgentRole, std::string> models;
  std::filesystem::path manifest;
  std::filesystem::path out_dir = "out";
  /// Response cache; disabled when empty.
  std::filesystem::path cache_dir;
};

/// Role names accepted on the command line and in config files.
std::optional<AgentRole> role_from_flag(std::string_view name);
/// "role=value" pairs; "all" sets every role. Throws ConfigError.
void apply_role_assignment(std::map<AgentRole, std::string>& target, std::string_view assignment);

/// Reads a config document: {"preset", "pipeline": {...}, "endpoints": {role: url},
/// "models": {role: name}, "manifest", "out", "cache_dir"}. Relative paths
/// resolve against `base_dir`. The preset is applied before "pipeline".
RunConfig run_config_from_json(const json& doc, const std::filesystem::path& base_dir);
json run_config_to_json(const RunConfig& config);

/// sha256 over the preset, pipeline settings, endpoints and models. Paths
/// are left out so the hash matches across machines.
std::string config_hash(const RunConfig& config);

/// Counters and timings of one command.
struct RunLedger {
  std::string command;
  std::uint64_t seed = 0;
  std::string config_hash;
  struct Stage {
    std::string name;
    double seconds = 0.0;
    std::map<std::string, std::size_t> calls;  // role -> requests issued
    std::map<std::string, std::size_t> counters;
  };
  std::vector<Stage> stages;
  /// Requests that reached an endpoint (cache misses), per role.
  std::map<std::string, std::size_t> upstream_calls;
  std::size_t cache_hits = 0;
};

/// Timings and cache figures vary between runs; they are written only when
/// `volatile_fields` is set.
json ledger_to_json(const RunLedger& ledger, bool volatile_fields);

}  // namespace crn
