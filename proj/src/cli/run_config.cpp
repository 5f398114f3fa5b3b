#include "crn/cli/run_config.hpp"

#include "crn/errors.hpp"
#include "crn/util/hash.hpp"

#include <algorithm>
#include <set>

namespace crn {
namespace {

constexpr AgentRole kRoles[] = {AgentRole::visual_concept, AgentRole::linguistic, AgentRole::verifier,
                                AgentRole::system1};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

// Relative file endpoints resolve like every other path in the document.
std::string resolve_endpoint(const std::filesystem::path& base, const std::string& url) {
  for (std::string_view scheme : {"oracle:", "transcript:"}) {
    if (url.rfind(scheme, 0) == 0) return std::string(scheme) + resolve(base, url.substr(scheme.size())).string();
  }
  return url;
}

json role_map_to_json(const std::map<AgentRole, std::string>& m) {
  json out = json::object();
  for (const auto& [role, value] : m) out[std::string(to_string(role))] = value;
  return out;
}

}  // namespace

std::optional<AgentRole> role_from_flag(std::string_view name) {
  if (name == "visual" || name == "visual_concept" || name == "concept") return AgentRole::visual_concept;
  if (name == "linguistic" || name == "reasoner") return AgentRole::linguistic;
  if (name == "verifier") return AgentRole::verifier;
  if (name == "system1" || name == "s1") return AgentRole::system1;
  return std::nullopt;
}

void apply_role_assignment(std::map<AgentRole, std::string>& target, std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == assignment.size())
    throw ConfigError("expected role=value, got '" + std::string(assignment) + "'");
  auto name = assignment.substr(0, eq);
  std::string value(assignment.substr(eq + 1));
  if (name == "all") {
    for (auto role : kRoles) target[role] = value;
    return;
  }
  auto role = role_from_flag(name);
  if (!role) throw ConfigError("unknown role '" + std::string(name) + "'");
  target[*role] = value;
}

RunConfig run_config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw SchemaError("run config: expected an object");
  static const std::set<std::string> keys = {"preset", "pipeline", "endpoints", "models",
                                             "manifest", "out", "cache_dir"};
  for (const auto& [key, _] : doc.items())
    if (!keys.count(key)) throw SchemaError("run config." + key + ": unknown field");
  RunConfig c;
  if (doc.contains("preset")) c.preset = require_string(doc, "preset", "run config");
  c.pipeline = preset(c.preset);
  if (doc.contains("pipeline")) c.pipeline = config_from_json(doc["pipeline"], c.pipeline);
  for (const auto* section : {"endpoints", "models"}) {
    if (!doc.contains(section)) continue;
    const auto& m = doc[section];
    if (!m.is_object()) throw SchemaError(std::string("run config.") + section + ": expected an object");
    auto& target = std::string(section) == "endpoints" ? c.endpoints : c.models;
    // "all" first so that specific roles override it.
    std::vector<std::pair<std::string, json>> entries;
    for (const auto& [k, v] : m.items()) entries.emplace_back(k, v);
    std::stable_partition(entries.begin(), entries.end(), [](const auto& e) { return e.first == "all"; });
    for (const auto& [role, value] : entries) {
      if (!value.is_string())
        throw SchemaError(std::string("run config.") + section + "." + role + ": expected a string");
      auto v = value.get<std::string>();
      if (std::string(section) == "endpoints") v = resolve_endpoint(base_dir, v);
      try {
        apply_role_assignment(target, role + "=" + v);
      } catch (const ConfigError& e) {
        throw SchemaError(std::string("run config.") + section + "." + role + ": " + e.what());
      }
    }
  }
  if (doc.contains("manifest")) c.manifest = resolve(base_dir, require_string(doc, "manifest", "run config"));
  if (doc.contains("out")) c.out_dir = resolve(base_dir, require_string(doc, "out", "run config"));
  if (doc.contains("cache_dir")) c.cache_dir = resolve(base_dir, require_string(doc, "cache_dir", "run config"));
  return c;
}

json run_config_to_json(const RunConfig& c) {
  json doc = {{"preset", c.preset},
              {"pipeline", config_to_json(c.pipeline)},
              {"endpoints", role_map_to_json(c.endpoints)},
              {"models", role_map_to_json(c.models)},
              {"out", c.out_dir.generic_string()}};
  if (!c.manifest.empty()) doc["manifest"] = c.manifest.generic_string();
  if (!c.cache_dir.empty()) doc["cache_dir"] = c.cache_dir.generic_string();
  return doc;
}

std::string config_hash(const RunConfig& c) {
  json ident = {{"preset", c.preset},
                {"pipeline", config_to_json(c.pipeline)},
                {"endpoints", role_map_to_json(c.endpoints)},
                {"models", role_map_to_json(c.models)}};
  // File endpoints are hashed by their last path component only.
  for (auto& [role, url] : ident["endpoints"].items()) {
    auto s = url.get<std::string>();
    for (std::string_view scheme : {"oracle:", "transcript:"}) {
      if (s.rfind(scheme, 0) != 0) continue;
      auto path = std::filesystem::path(s.substr(scheme.size())).lexically_normal();
      if (path.filename().empty()) path = path.parent_path();
      url = std::string(scheme) + path.filename().string();
    }
  }
  return sha256_hex(ident.dump());
}

json ledger_to_json(const RunLedger& l, bool volatile_fields) {
  json stages = json::array();
  for (const auto& s : l.stages) {
    json st = {{"name", s.name}, {"calls", s.calls}, {"counters", s.counters}};
    if (volatile_fields) st["seconds"] = s.seconds;
    stages.push_back(std::move(st));
  }
  json doc = {{"command", l.command}, {"seed", l.seed}, {"config_hash", l.config_hash}, {"stages", stages}};
  if (volatile_fields) {
    doc["upstream_calls"] = l.upstream_calls;
    doc["cache_hits"] = l.cache_hits;
  }
  return doc;
}

}  // namespace crn
