#include "crn/cli/commands.hpp"

#include "crn/agents/caching_agent.hpp"
#include "crn/agents/http_agent.hpp"
#include "crn/agents/transcript_agent.hpp"
#include "crn/cli/run_config.hpp"
#include "crn/errors.hpp"
#include "crn/metrics/accuracy.hpp"
#include "crn/metrics/grounding.hpp"
#include "crn/metrics/report.hpp"
#include "crn/metrics/sweep.hpp"
#include "crn/metrics/ttest.hpp"
#include "crn/pipeline/artifacts.hpp"
#include "crn/pipeline/stages.hpp"
#include "crn/rulecore/ruleset_json.hpp"
#include "crn/synthworld/oracle_agent.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <ostream>

namespace crn {
namespace {

namespace fs = std::filesystem;

constexpr AgentRole kRoles[] = {AgentRole::visual_concept, AgentRole::linguistic, AgentRole::verifier,
                                AgentRole::system1};

class UsageError : public Error {
public:
  using Error::Error;
};

struct Options {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> endpoints;
  std::vector<std::string> models;
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::string grounded;
  std::string out;
  std::string manifest;
  std::string cache_dir;
  std::string preset;
  std::optional<int> concurrency;
  bool timing = false;
  bool quiet = false;

  std::string concepts;
  std::string symbols;
  std::string rules;
  std::string predictions;
  std::string split = "test";
  std::vector<std::string> splits{"train", "test"};
  bool plus = false;
  std::vector<double> lambdas;
  std::string a;
  std::string b;
  std::string spec;
  std::optional<int> classes;
  std::string published;
  std::string run_dir;
  std::vector<int> lengths{1, 2, 3, 4};
};

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

RunConfig resolve_config(const Options& o) {
  RunConfig c;
  if (!o.config_file.empty()) {
    auto doc = read_json_file(o.config_file);
    if (!o.preset.empty() && doc.is_object()) doc["preset"] = o.preset;
    c = run_config_from_json(doc, fs::path(o.config_file).parent_path());
  } else if (!o.preset.empty()) {
    c.preset = o.preset;
    c.pipeline = preset(o.preset);
  }
  for (const auto& e : o.endpoints) apply_role_assignment(c.endpoints, e);
  for (const auto& m : o.models) apply_role_assignment(c.models, m);
  if (auto base = env_or_empty("CRN_API_BASE"); !base.empty()) {
    for (auto role : kRoles) c.endpoints.try_emplace(role, base);
  }
  if (o.seed) c.pipeline.seed = *o.seed;
  if (o.lambda) c.pipeline.lambda = *o.lambda;
  if (o.epsilon) c.pipeline.epsilon = *o.epsilon;
  if (!o.grounded.empty()) c.pipeline.grounded = o.grounded == "true";
  if (o.concurrency) c.pipeline.concurrency = *o.concurrency;
  if (!o.out.empty()) c.out_dir = o.out;
  if (!o.manifest.empty()) c.manifest = o.manifest;
  if (!o.cache_dir.empty()) {
    c.cache_dir = o.cache_dir;
  } else if (c.cache_dir.empty()) {
    c.cache_dir = env_or_empty("CRN_CACHE_DIR");
  }
  validate(c.pipeline);
  return c;
}

std::optional<fs::path> oracle_dir(const RunConfig& c) {
  for (auto role : kRoles) {
    auto it = c.endpoints.find(role);
    if (it != c.endpoints.end() && it->second.rfind("oracle:", 0) == 0) return fs::path(it->second.substr(7));
  }
  return std::nullopt;
}

Manifest manifest_of(const RunConfig& c) {
  if (!c.manifest.empty()) return load_manifest(c.manifest);
  if (auto dir = oracle_dir(c)) return load_manifest(*dir / "manifest.json");
  throw UsageError("--manifest is required");
}

/// Builds one agent chain per distinct endpoint URL and counts requests.
class AgentHub {
public:
  explicit AgentHub(const RunConfig& config) : config_(config) {
    if (!config.cache_dir.empty()) cache_ = std::make_shared<ResponseCache>(config.cache_dir);
  }

  RoleBinding binding(AgentRole role) {
    auto it = config_.endpoints.find(role);
    if (it == config_.endpoints.end())
      throw UsageError("no endpoint for role " + std::string(to_string(role)) +
                       " (use --endpoint " + std::string(to_string(role)) + "=URL)");
    auto model = config_.models.count(role) ? config_.models.at(role) : std::string();
    return RoleBinding{chain(it->second).issued, make_endpoint(role, it->second, model)};
  }

  bool has(AgentRole role) const { return config_.endpoints.count(role) > 0; }

  std::map<std::string, std::size_t> issued() const { return count([](const Chain& c) { return c.issued.get(); }); }
  std::map<std::string, std::size_t> upstream() const {
    return count([](const Chain& c) { return c.upstream.get(); });
  }
  std::size_t cache_hits() const {
    std::size_t n = 0;
    for (const auto& [_, c] : chains_) n += c.cache ? c.cache->hits() : 0;
    return n;
  }

private:
  struct Chain {
    std::shared_ptr<CountingAgent> upstream;
    std::shared_ptr<CachingAgent> cache;
    std::shared_ptr<CountingAgent> issued;
  };

  template <typename Pick>
  std::map<std::string, std::size_t> count(Pick pick) const {
    std::map<std::string, std::size_t> out;
    for (const auto& [_, c] : chains_)
      for (auto role : kRoles)
        if (auto n = pick(c)->calls(role)) out[std::string(to_string(role))] += n;
    return out;
  }

  Chain& chain(const std::string& url) {
    auto it = chains_.find(url);
    if (it != chains_.end()) return it->second;
    std::shared_ptr<Agent> backend;
    if (url.rfind("oracle:", 0) == 0) {
      backend = std::make_shared<OracleAgent>(load_world(url.substr(7)));
    } else if (url.rfind("transcript:", 0) == 0) {
      backend = TranscriptAgent::load(url.substr(11));
    } else if (url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0) {
      backend = std::make_shared<HttpChatAgent>(HttpChatAgent::options_from_env());
    } else {
      throw UsageError("unsupported endpoint '" + url + "' (expected http(s)://, oracle: or transcript:)");
    }
    Chain c;
    c.upstream = std::make_shared<CountingAgent>(backend);
    std::shared_ptr<Agent> top = c.upstream;
    if (cache_) {
      c.cache = std::make_shared<CachingAgent>(top, cache_);
      top = c.cache;
    }
    c.issued = std::make_shared<CountingAgent>(top);
    return chains_.emplace(url, std::move(c)).first->second;
  }

  const RunConfig& config_;
  std::shared_ptr<ResponseCache> cache_;
  std::map<std::string, Chain> chains_;
};

std::map<std::string, std::size_t> diff(const std::map<std::string, std::size_t>& after,
                                        const std::map<std::string, std::size_t>& before) {
  std::map<std::string, std::size_t> out;
  for (const auto& [k, v] : after) {
    auto prev = before.count(k) ? before.at(k) : 0;
    if (v > prev) out[k] = v - prev;
  }
  return out;
}

/// Runs one command and records its stages.
class Session {
public:
  Session(std::string command, const RunConfig& config, bool timing)
      : config_(config), hub_(config), timing_(timing) {
    ledger_.command = std::move(command);
    ledger_.seed = config.pipeline.seed;
    ledger_.config_hash = config_hash(config);
  }

  AgentHub& hub() { return hub_; }
  const RunConfig& config() const { return config_; }
  fs::path out(const std::string& name) const { return config_.out_dir / name; }

  template <typename Fn>
  auto stage(const std::string& name, Fn&& fn) {
    RunLedger::Stage st;
    st.name = name;
    auto before = hub_.issued();
    auto start = std::chrono::steady_clock::now();
    auto finish = [&] {
      st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      st.calls = diff(hub_.issued(), before);
      ledger_.stages.push_back(st);
    };
    auto result = fn(st.counters);
    finish();
    return result;
  }

  void write_ledger(const std::string& file) {
    ledger_.upstream_calls = hub_.upstream();
    ledger_.cache_hits = hub_.cache_hits();
    write_json_file(out(file), ledger_to_json(ledger_, timing_));
    spdlog::info("agent requests: {} issued, {} cache hits", json(hub_.issued()).dump(), ledger_.cache_hits);
  }

private:
  const RunConfig& config_;
  AgentHub hub_;
  bool timing_;
  RunLedger ledger_;
};

using Counters = std::map<std::string, std::size_t>;

fs::path or_default(const std::string& given, const fs::path& fallback) {
  return given.empty() ? fallback : fs::path(given);
}

std::vector<ConceptSet> do_extract(Session& s, const Manifest& m) {
  return s.stage("extract", [&](Counters& c) {
    auto sets = extract_all_concepts(m, s.config().pipeline, s.hub().binding(AgentRole::visual_concept));
    for (const auto& set : sets) c["failed_images"] += set.failures;
    return sets;
  });
}

std::vector<SymbolPool> do_symbols(Session& s, const Manifest& m, const std::vector<ConceptSet>& concepts) {
  return s.stage("symbols", [&](Counters& c) {
    auto pools = build_all_pools(m, concepts, s.config().pipeline, s.hub().binding(AgentRole::linguistic));
    for (const auto& p : pools) {
      c["symbols"] += p.symbols.size();
      c["failed_replies"] += p.failures;
    }
    return pools;
  });
}

RuleSet do_rules(Session& s, const Manifest& m, const std::vector<ConceptSet>& concepts,
                 const std::vector<SymbolPool>& pools) {
  return s.stage("rules", [&](Counters& c) {
    std::vector<RuleFormationStats> stats;
    auto rules = form_all_rules(m, concepts, pools, s.config().pipeline, s.hub().binding(AgentRole::linguistic),
                                &stats);
    for (const auto& st : stats) {
      c["candidates"] += st.candidates;
      c["kept"] += st.kept;
      c["ambiguous"] += st.ambiguous;
    }
    return rules;
  });
}

RuleSet do_plus(Session& s, const RuleSet& rules) {
  return s.stage("counterfactual", [&](Counters& c) {
    auto plus = augment_counterfactual(rules, s.config().pipeline.seed);
    c["rules"] = plus.rules.size();
    return plus;
  });
}

PredictionSet do_infer(Session& s, const Manifest& m, const RuleSet& rules, const std::string& split,
                       const std::string& name) {
  return s.stage(name, [&](Counters& c) {
    PredictionSet ps;
    ps.dataset = m.name;
    ps.split = split;
    ps.lambda = s.config().pipeline.lambda;
    ps.labels = rules.labels;
    ps.predictions = infer_split(m, split, rules, s.hub().binding(AgentRole::verifier),
                                 s.hub().binding(AgentRole::system1), s.config().pipeline);
    c["items"] = ps.predictions.size();
    for (const auto& p : ps.predictions) c["degraded"] += p.degraded;
    return ps;
  });
}

json evaluate(const PredictionSet& ps, const std::vector<double>& lambdas) {
  auto ends = lambda_sweep(ps.predictions, {0.0, 1.0});
  json doc = {{"dataset", ps.dataset},
              {"split", ps.split},
              {"n", ps.predictions.size()},
              {"lambda", ps.lambda},
              {"accuracy", accuracy(ps.predictions)},
              {"s1_accuracy", ends[0].second},
              {"s2_accuracy", ends[1].second}};
  if (!lambdas.empty()) {
    json sweep = json::array();
    for (const auto& [l, acc] : lambda_sweep(ps.predictions, lambdas)) sweep.push_back({{"lambda", l}, {"accuracy", acc}});
    doc["lambda_sweep"] = sweep;
  }
  return doc;
}

int cmd_extract(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o);
  auto m = manifest_of(cfg);
  fs::create_directories(cfg.out_dir);
  Session s("extract", cfg, o.timing);
  auto concepts = do_extract(s, m);
  write_json_file(s.out("concepts.json"), concepts_to_json(m.name, concepts));
  s.write_ledger("ledger_extract.json");
  out << s.out("concepts.json").string() << "\n";
  return kExitOk;
}

int cmd_symbols(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o);
  auto m = manifest_of(cfg);
  fs::create_directories(cfg.out_dir);
  Session s("symbols", cfg, o.timing);
  auto concepts = concepts_from_json(read_json_file(or_default(o.concepts, s.out("concepts.json"))));
  auto pools = do_symbols(s, m, concepts);
  write_json_file(s.out("symbols.json"), symbols_to_json(m.name, pools));
  s.write_ledger("ledger_symbols.json");
  out << s.out("symbols.json").string() << "\n";
  return kExitOk;
}

int cmd_rules(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o);
  fs::create_directories(cfg.out_dir);
  Session s("rules", cfg, o.timing);
  const int max_len = cfg.pipeline.max_rule_length;
  if (o.plus && !o.rules.empty()) {
    auto plus = do_plus(s, load_ruleset(o.rules, max_len));
    save_ruleset(s.out("rules_plus.json"), plus);
    s.write_ledger("ledger_rules.json");
    out << s.out("rules_plus.json").string() << "\n";
    return kExitOk;
  }
  auto m = manifest_of(cfg);
  auto concepts = concepts_from_json(read_json_file(or_default(o.concepts, s.out("concepts.json"))));
  auto pools = symbols_from_json(read_json_file(or_default(o.symbols, s.out("symbols.json"))));
  auto rules = do_rules(s, m, concepts, pools);
  save_ruleset(s.out("rules.json"), rules);
  out << s.out("rules.json").string() << "\n";
  if (o.plus) {
    save_ruleset(s.out("rules_plus.json"), do_plus(s, rules));
    out << s.out("rules_plus.json").string() << "\n";
  }
  s.write_ledger("ledger_rules.json");
  return kExitOk;
}

int cmd_infer(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o);
  auto m = manifest_of(cfg);
  fs::create_directories(cfg.out_dir);
  Session s("infer", cfg, o.timing);
  auto rules = load_ruleset(or_default(o.rules, s.out("rules.json")), cfg.pipeline.max_rule_length);
  auto ps = do_infer(s, m, rules, o.split, "infer");
  auto path = or_default(o.predictions, s.out("predictions.json"));
  write_json_file(path, predictions_to_json(ps));
  s.write_ledger("ledger_infer.json");
  out << path.string() << "\n";
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o);
  auto ps = predictions_from_json(read_json_file(or_default(o.predictions, cfg.out_dir / "predictions.json")));
  auto doc = evaluate(ps, o.lambdas);
  fs::create_directories(cfg.out_dir);
  write_json_file(cfg.out_dir / "eval.json", doc);
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_metrics(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o);
  auto m = manifest_of(cfg);
  fs::create_directories(cfg.out_dir);
  Session s("metrics", cfg, o.timing);
  auto rules = load_ruleset(or_default(o.rules, s.out("rules.json")), cfg.pipeline.max_rule_length);
  json doc;
  doc["grounding"] = s.stage("grounding", [&](Counters&) {
    return grounding_to_json(grounding_score(rules, m, o.splits, s.hub().binding(AgentRole::verifier), cfg.pipeline));
  });
  doc["entropy"] = s.stage("entropy", [&](Counters&) {
    return entropy_to_json(entropy_report(rules, m, o.split, s.hub().binding(AgentRole::verifier), cfg.pipeline));
  });
  if (s.hub().has(AgentRole::linguistic)) {
    doc["representativeness"] = s.stage("representativeness", [&](Counters& c) {
      auto task = cfg.pipeline.task.empty() ? m.task : cfg.pipeline.task;
      auto r = representativeness_score(rules, task, s.hub().binding(AgentRole::linguistic), cfg.pipeline.seed);
      c["skipped"] = r.skipped;
      return representativeness_to_json(r);
    });
  }
  if (auto dir = oracle_dir(cfg)) doc["hallucination_rate"] = hallucination_rate(rules, load_world(*dir));
  write_json_file(s.out("metrics.json"), doc);
  s.write_ledger("ledger_metrics.json");
  out << doc.dump(2) << "\n";
  return kExitOk;
}

std::vector<double> read_accuracies(const fs::path& path) {
  auto doc = read_json_file(path);
  const json* arr = &doc;
  if (doc.is_object()) arr = &require_array(doc, "accuracies", path.string());
  if (!arr->is_array()) throw SchemaError(path.string() + ": expected an array of accuracies");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    if (!(*arr)[i].is_number())
      throw SchemaError(path.string() + ": accuracies[" + std::to_string(i) + "]: expected a number");
    out.push_back((*arr)[i].get<double>());
  }
  return out;
}

int cmd_stats(const Options& o, std::ostream& out) {
  auto a = read_accuracies(o.a);
  auto b = read_accuracies(o.b);
  if (a.size() != b.size())
    throw UsageError("--a has " + std::to_string(a.size()) + " accuracies but --b has " + std::to_string(b.size()));
  if (a.size() < 2) throw UsageError("need at least two paired accuracies");
  out << ttest_to_json(paired_ttest(a, b)).dump(2) << "\n";
  return kExitOk;
}

int cmd_synth_gen(const Options& o, std::ostream& out) {
  WorldSpec spec;
  if (!o.spec.empty()) spec = spec_from_json(read_json_file(o.spec));
  if (o.seed) spec.seed = *o.seed;
  if (o.classes) {
    spec.classes = *o.classes;
    spec.class_names.clear();
  }
  validate(spec);
  fs::path dir = o.out.empty() ? fs::path("world") : fs::path(o.out);
  auto world = gen_world(spec);
  auto items = sample_dataset(world);
  write_world_dir(world, items, dir);
  out << dir.string() << ": " << world.labels.size() << " classes, " << items.size() << " images\n";
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  auto published = read_json_file(o.published.empty() ? default_published_path() : fs::path(o.published));
  fs::path out_dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
  fs::path run_dir = o.run_dir.empty() ? out_dir : fs::path(o.run_dir);
  json run;
  for (const auto* name : {"eval", "metrics", "ledger", "sweep"}) {
    auto p = run_dir / (std::string(name) + ".json");
    if (fs::exists(p)) run[name] = read_json_file(p);
  }
  fs::create_directories(out_dir);
  auto path = out_dir / "report.md";
  write_text_file(path, render_report(published, run));
  out << path.string() << "\n";
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o);
  WorldSpec spec;
  if (!o.spec.empty()) spec = spec_from_json(read_json_file(o.spec));
  if (o.classes) {
    spec.classes = *o.classes;
    spec.class_names.clear();
  }
  auto points = rule_length_sweep(spec, cfg.pipeline, o.lengths);
  fs::create_directories(cfg.out_dir);
  write_json_file(cfg.out_dir / "sweep.json", sweep_to_json(points, o.timing));
  auto csv = sweep_to_csv(points, o.timing);
  write_text_file(cfg.out_dir / "sweep.csv", csv);
  out << csv;
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o);
  auto m = manifest_of(cfg);
  fs::create_directories(cfg.out_dir);
  Session s("run", cfg, o.timing);
  json config_doc = {{"preset", cfg.preset}, {"pipeline", config_to_json(cfg.pipeline)}};
  write_json_file(s.out("config.json"), config_doc);

  auto concepts = do_extract(s, m);
  write_json_file(s.out("concepts.json"), concepts_to_json(m.name, concepts));
  auto pools = do_symbols(s, m, concepts);
  write_json_file(s.out("symbols.json"), symbols_to_json(m.name, pools));
  auto rules = do_rules(s, m, concepts, pools);
  save_ruleset(s.out("rules.json"), rules);

  auto ps = do_infer(s, m, rules, o.split, "infer");
  write_json_file(s.out("predictions.json"), predictions_to_json(ps));
  json eval = evaluate(ps, o.lambdas);
  if (o.plus) {
    auto plus = do_plus(s, rules);
    save_ruleset(s.out("rules_plus.json"), plus);
    auto pp = do_infer(s, m, plus, o.split, "infer_plus");
    write_json_file(s.out("predictions_plus.json"), predictions_to_json(pp));
    eval["plus"] = evaluate(pp, o.lambdas);
  }
  write_json_file(s.out("eval.json"), eval);
  s.write_ledger("ledger.json");
  out << eval.dump(2) << "\n";
  return kExitOk;
}

void configure_logging(bool quiet) {
  static const bool once = [] {
    auto logger = spdlog::stderr_color_mt("crn");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)once;
  spdlog::set_level(quiet ? spdlog::level::warn : spdlog::level::info);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Grounded neurosymbolic rule learning with agent pipelines", "crn"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  app.add_option("--config", o.config_file, "Run config file (JSON)")->check(CLI::ExistingFile);
  app.add_option("--preset", o.preset, "Hyperparameter preset")->check(CLI::IsMember(preset_names()));
  app.add_option("--seed", o.seed, "Seed for sampling and augmentation");
  app.add_option("--endpoint", o.endpoints, "role=url; role is visual, linguistic, verifier, system1 or all")
      ->allow_extra_args(false);
  app.add_option("--model", o.models, "role=model name")->allow_extra_args(false);
  app.add_option("--lambda", o.lambda, "Fusion weight of System 2")->check(CLI::Range(0.0, 1.0));
  app.add_option("--epsilon", o.epsilon, "Entailment threshold")->check(CLI::Range(0.0, 1.0));
  app.add_option("--grounded", o.grounded, "Visual context in Stage 2 prompts")
      ->check(CLI::IsMember({"true", "false"}));
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--manifest", o.manifest, "Dataset manifest")->check(CLI::ExistingFile);
  app.add_option("--cache-dir", o.cache_dir, "Response cache directory");
  app.add_option("--concurrency", o.concurrency, "Concurrent agent requests")->check(CLI::PositiveNumber);
  app.add_flag("--timing", o.timing, "Record timings and cache statistics in ledgers");
  app.add_flag("--quiet", o.quiet, "Only log warnings and errors");

  auto* extract = app.add_subcommand("extract", "Stage 1: visual concepts per class");
  auto* symbols = app.add_subcommand("symbols", "Symbol initialization and exploration");
  symbols->add_option("--concepts", o.concepts, "Concepts file")->check(CLI::ExistingFile);
  auto* rules = app.add_subcommand("rules", "Rule formation and entailment filtering");
  rules->add_option("--concepts", o.concepts, "Concepts file")->check(CLI::ExistingFile);
  rules->add_option("--symbols", o.symbols, "Symbols file")->check(CLI::ExistingFile);
  rules->add_option("--rules", o.rules, "Existing rules to augment (with --plus)")->check(CLI::ExistingFile);
  rules->add_flag("--plus", o.plus, "Also write counterfactually augmented rules");
  auto* infer = app.add_subcommand("infer", "Verify, classify and fuse over a split");
  infer->add_option("--rules", o.rules, "Rules file")->check(CLI::ExistingFile);
  infer->add_option("--split", o.split, "Split")->check(CLI::IsMember({"train", "val", "test"}));
  infer->add_option("--predictions", o.predictions, "Output file");
  auto* eval = app.add_subcommand("eval", "Accuracy of a predictions file");
  eval->add_option("--predictions", o.predictions, "Predictions file")->check(CLI::ExistingFile);
  eval->add_option("--lambdas", o.lambdas, "Re-fuse at these weights")->delimiter(',');
  auto* metrics = app.add_subcommand("metrics", "Grounding, entropy and representativeness");
  metrics->add_option("--rules", o.rules, "Rules file")->check(CLI::ExistingFile);
  metrics->add_option("--splits", o.splits, "Splits for grounding")->delimiter(',');
  metrics->add_option("--split", o.split, "Split for entropy")->check(CLI::IsMember({"train", "val", "test"}));
  auto* stats = app.add_subcommand("stats", "Paired two-sided t-test over two accuracy files");
  stats->add_option("--a", o.a, "Accuracies of the first method")->required()->check(CLI::ExistingFile);
  stats->add_option("--b", o.b, "Accuracies of the second method")->required()->check(CLI::ExistingFile);
  auto* synth = app.add_subcommand("synth", "Synthetic worlds");
  synth->require_subcommand(1);
  auto* gen = synth->add_subcommand("gen", "Generate a synthetic world directory");
  gen->add_option("--spec", o.spec, "World spec file")->check(CLI::ExistingFile);
  gen->add_option("--classes", o.classes, "Number of classes")->check(CLI::Range(2, 64));
  auto* report = app.add_subcommand("report", "Markdown report with recomputed statistics");
  report->add_option("--published", o.published, "Published accuracy table")->check(CLI::ExistingFile);
  report->add_option("--run", o.run_dir, "Run directory to include")->check(CLI::ExistingDirectory);
  auto* sweep = app.add_subcommand("sweep", "Accuracy and agent calls against maximum rule length");
  sweep->add_option("--spec", o.spec, "World spec file")->check(CLI::ExistingFile);
  sweep->add_option("--classes", o.classes, "Number of classes")->check(CLI::Range(2, 64));
  sweep->add_option("--lengths", o.lengths, "Maximum rule lengths")->delimiter(',');
  auto* run = app.add_subcommand("run", "Full pipeline: extract, symbols, rules, infer, eval");
  run->add_option("--split", o.split, "Split")->check(CLI::IsMember({"train", "val", "test"}));
  run->add_flag("--plus", o.plus, "Also run with counterfactually augmented rules");
  run->add_option("--lambdas", o.lambdas, "Also report accuracy at these weights")->delimiter(',');

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  configure_logging(o.quiet);
  try {
    if (*extract) return cmd_extract(o, out);
    if (*symbols) return cmd_symbols(o, out);
    if (*rules) return cmd_rules(o, out);
    if (*infer) return cmd_infer(o, out);
    if (*eval) return cmd_eval(o, out);
    if (*metrics) return cmd_metrics(o, out);
    if (*stats) return cmd_stats(o, out);
    if (*gen) return cmd_synth_gen(o, out);
    if (*report) return cmd_report(o, out);
    if (*sweep) return cmd_sweep(o, out);
    if (*run) return cmd_run(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace crn
