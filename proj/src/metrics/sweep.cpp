#include "crn/metrics/sweep.hpp"

#include "crn/metrics/accuracy.hpp"
#include "crn/pipeline/stages.hpp"
#include "crn/synthworld/oracle_agent.hpp"

#include <fmt/format.h>

#include <chrono>

namespace crn {

std::vector<LengthSweepPoint> rule_length_sweep(const WorldSpec& spec, const PipelineConfig& config,
                                                const std::vector<int>& lengths) {
  auto world = gen_world(spec);
  auto manifest = manifest_from_world(world, sample_dataset(world));
  auto counter = std::make_shared<CountingAgent>(std::make_shared<OracleAgent>(world));
  auto binding = [&](AgentRole role) { return RoleBinding{counter, make_endpoint(role, "oracle:")}; };
  auto visual = binding(AgentRole::visual_concept), linguistic = binding(AgentRole::linguistic);
  auto verifier = binding(AgentRole::verifier), system1 = binding(AgentRole::system1);

  auto concepts = extract_all_concepts(manifest, config, visual);
  auto pools = build_all_pools(manifest, concepts, config, linguistic);

  std::vector<LengthSweepPoint> out;
  for (int n : lengths) {
    auto cfg = config;
    cfg.max_rule_length = n;
    LengthSweepPoint pt;
    pt.max_rule_length = n;
    auto start = std::chrono::steady_clock::now();
    auto before = counter->calls();
    auto rules = form_all_rules(manifest, concepts, pools, cfg, linguistic);
    pt.formation_calls = counter->calls() - before;
    pt.rules = rules.rules.size();
    pt.accuracy = accuracy(infer_split(manifest, "test", rules, verifier, system1, cfg));
    pt.total_calls = counter->calls() - before;
    pt.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(pt);
  }
  return out;
}

json sweep_to_json(const std::vector<LengthSweepPoint>& points, bool timing) {
  json arr = json::array();
  for (const auto& p : points) {
    json row = {{"max_rule_length", p.max_rule_length},
                {"rules", p.rules},
                {"formation_calls", p.formation_calls},
                {"total_calls", p.total_calls},
                {"accuracy", p.accuracy}};
    if (timing) row["seconds"] = p.seconds;
    arr.push_back(std::move(row));
  }
  return arr;
}

std::string sweep_to_csv(const std::vector<LengthSweepPoint>& points, bool timing) {
  std::string out = timing ? "max_rule_length,rules,formation_calls,total_calls,accuracy,seconds\n"
                           : "max_rule_length,rules,formation_calls,total_calls,accuracy\n";
  for (const auto& p : points) {
    out += fmt::format("{},{},{},{},{:.4f}", p.max_rule_length, p.rules, p.formation_calls, p.total_calls,
                       p.accuracy);
    if (timing) out += fmt::format(",{:.3f}", p.seconds);
    out += "\n";
  }
  return out;
}

}  // namespace crn
