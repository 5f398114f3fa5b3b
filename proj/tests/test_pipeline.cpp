#include <doctest.h>

#include "crn/agents/prompts.hpp"
#include "crn/errors.hpp"
#include "crn/pipeline/artifacts.hpp"
#include "crn/pipeline/inference.hpp"
#include "crn/pipeline/stages.hpp"
#include "crn/rulecore/dsl.hpp"
#include "crn/rulecore/ruleset_json.hpp"
#include "crn/synthworld/oracle_agent.hpp"
#include "oracles.hpp"

#include <cmath>
#include <mutex>
#include <set>

using namespace crn;

namespace {

using Fn = FunctionAgent::Fn;

RoleBinding bind(AgentRole role, Fn fn) {
  return RoleBinding{std::make_shared<FunctionAgent>(std::move(fn)), make_endpoint(role, "mock:")};
}

AgentReply text(std::string t) { return AgentReply{std::move(t), {}}; }

AgentReply yes_no(double p) {
  return AgentReply{"Yes", {{"Yes", std::log(p)}, {"No", std::log(1.0 - p)}}};
}

Manifest tiny_manifest(int per_class = 2) {
  Manifest m;
  m.name = "tiny";
  m.task = "blood cell";
  m.classes = {"basophil", "eosinophil"};
  for (const auto& c : m.classes) {
    for (int i = 0; i < per_class; ++i) {
      auto id = c + std::to_string(i);
      m.items.push_back({id, "synth:" + id, c, "train"});
      auto img = std::make_shared<SynthImage>();
      img->id = id;
      img->label = c;
      m.synth[id] = img;
    }
  }
  return m;
}

PipelineConfig quick_config() {
  PipelineConfig c;
  c.concurrency = 4;
  return c;
}

struct SynthSetup {
  World world;
  Manifest manifest;
  AgentSet agents;
  std::shared_ptr<CountingAgent> counter;
};

SynthSetup synth_setup(WorldSpec spec) {
  SynthSetup s{gen_world(spec), {}, {}, nullptr};
  s.manifest = manifest_from_world(s.world, sample_dataset(s.world));
  s.counter = std::make_shared<CountingAgent>(std::make_shared<OracleAgent>(s.world));
  s.agents = {RoleBinding{s.counter, make_endpoint(AgentRole::visual_concept, "oracle:")},
              RoleBinding{s.counter, make_endpoint(AgentRole::linguistic, "oracle:")},
              RoleBinding{s.counter, make_endpoint(AgentRole::verifier, "oracle:")},
              RoleBinding{s.counter, make_endpoint(AgentRole::system1, "oracle:")}};
  return s;
}

double accuracy_of(const std::vector<Prediction>& preds) {
  std::size_t ok = 0;
  for (const auto& p : preds) ok += p.argmax == p.truth;
  return static_cast<double>(ok) / static_cast<double>(preds.size());
}

}  // namespace

TEST_CASE("pipeline config presets and validation") {
  auto d = preset("default");
  CHECK(d.concepts_per_image == 5);
  CHECK(d.initial_symbols == 5);
  CHECK(d.max_rule_length == 3);
  CHECK(d.epsilon == 0.7);
  CHECK(d.explore_iterations == 7);
  CHECK(d.images_per_class == 50);
  CHECK(d.lambda == 0.5);
  CHECK(d.concept_temperature == 0.2);
  CHECK(d.explore_temperature == 0.7);
  CHECK(d.entail_temperature == 0.0);
  CHECK(preset("medical").explore_iterations == 10);
  CHECK(preset("satellite").lambda == 0.7);
  CHECK(preset("whu").lambda == 0.5);
  CHECK(preset("inaturalist").lambda == 0.7);
  CHECK_THROWS_AS(preset("imagenet"), ConfigError);

  PipelineConfig bad;
  bad.lambda = 1.5;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = {};
  bad.epsilon = 1.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = {};
  bad.max_rule_length = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);

  PipelineConfig c;
  c.seed = 99;
  c.grounded = false;
  c.aggregation = Aggregation::mean;
  c.entail_samples = 3;
  auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(config_from_json(json{{"lambda", 0.9}}, preset("medical")).explore_iterations == 10);
  CHECK_THROWS_AS(config_from_json(json{{"lamda", 0.9}}), SchemaError);
  CHECK_THROWS_AS(config_from_json(json{{"aggregation", "median"}}), ConfigError);
}

TEST_CASE("manifest parsing") {
  json doc = {{"name", "blood"},
              {"task", "blood cell"},
              {"classes", {"basophil", "eosinophil"}},
              {"items",
               {{{"id", "a"}, {"path", "img/a.png"}, {"label", "basophil"}, {"split", "train"}},
                {{"id", "b"}, {"path", "/abs/b.png"}, {"label", "eosinophil"}, {"split", "test"}}}}};
  auto m = manifest_from_json(doc, "/data");
  CHECK(m.items_for("basophil", "train").size() == 1);
  CHECK(m.split_items("test").size() == 1);
  CHECK(m.stimulus(m.items[0], "q").image == std::filesystem::path("/data/img/a.png"));
  CHECK(m.stimulus(m.items[1], "q").image == std::filesystem::path("/abs/b.png"));

  auto broken = doc;
  broken["items"][1]["split"] = "holdout";
  CHECK_THROWS_WITH_AS(manifest_from_json(broken, "/data"), doctest::Contains("items[1].split"), SchemaError);
  broken = doc;
  broken["items"][0]["label"] = "neutrophil";
  CHECK_THROWS_WITH_AS(manifest_from_json(broken, "/data"), doctest::Contains("items[0].label"), SchemaError);
  broken = doc;
  broken["items"][1]["id"] = "a";
  CHECK_THROWS_AS(manifest_from_json(broken, "/data"), SchemaError);
}

TEST_CASE("extract_concepts unions per-image lists") {
  auto m = tiny_manifest(2);
  auto visual = bind(AgentRole::visual_concept, [](const AgentEndpoint& ep, std::string_view, const Stimulus& s) {
    CHECK(ep.temperature == 0.2);
    CHECK(s.text == "In this picture, we see basophil. List 5 visual concepts that can be seen in relation to basophil.");
    return text(s.synth->id == "basophil0" ? "1. A\n2. B" : "1. b\n2. C");
  });
  auto cfg = quick_config();
  auto set = extract_concepts(m, "basophil", cfg, visual);
  CHECK(set.names() == std::vector<std::string>{"a", "b", "c"});
  CHECK(set.source_image_ids.size() == 2);

  Manifest empty = m;
  empty.items.erase(std::remove_if(empty.items.begin(), empty.items.end(),
                                   [](const ManifestItem& it) { return it.label == "eosinophil"; }),
                    empty.items.end());
  CHECK_THROWS_AS(extract_concepts(empty, "eosinophil", cfg, visual), StageFailure);
}

TEST_CASE("extract_concepts tolerates minority failures only") {
  auto m = tiny_manifest(4);
  std::atomic<int> calls{0};
  auto flaky = [&](int failing) {
    return bind(AgentRole::visual_concept, [&, failing](const AgentEndpoint&, std::string_view, const Stimulus& s) {
      ++calls;
      int k = s.synth->id.back() - '0';
      if (k < failing) return text("I cannot see the image.");
      return text("1. lobed nucleus");
    });
  };
  auto cfg = quick_config();
  auto ok = extract_concepts(m, "basophil", cfg, flaky(2));
  CHECK(ok.failures == 2);
  CHECK(ok.names() == std::vector<std::string>{"lobed nucleus"});
  CHECK_THROWS_AS(extract_concepts(m, "basophil", cfg, flaky(3)), StageFailure);

  calls = 0;
  cfg.images_per_class = 3;
  extract_concepts(m, "basophil", cfg, flaky(0));
  CHECK(calls == 3);
}

TEST_CASE("extract_concepts on a noiseless synthworld stays inside the class vocabulary") {
  WorldSpec spec;
  spec.concept_noise = 0.0;
  auto s = synth_setup(spec);
  auto cfg = quick_config();
  for (const auto& y : s.world.labels) {
    auto set = extract_concepts(s.manifest, y, cfg, s.agents.visual);
    CHECK_FALSE(set.concepts.empty());
    for (const auto& c : set.names()) CHECK(s.world.is_true_symbol(y, c));
  }
  CHECK(s.counter->calls(AgentRole::visual_concept) == 5u * 50u);
}

TEST_CASE("init_symbols") {
  auto cfg = quick_config();
  auto five = bind(AgentRole::linguistic, [](const AgentEndpoint& ep, std::string_view, const Stimulus& s) {
    CHECK(ep.temperature == 0.7);
    CHECK(s.text.rfind("In a picture, we see basophil. List ", 0) == 0);
    return text("1. lobed nucleus\n2. dark granules\n3. purple cytoplasm\n4. large cell\n5. coarse granules");
  });
  std::string asked;
  auto capture = bind(AgentRole::linguistic, [&](const AgentEndpoint&, std::string_view, const Stimulus& s) {
    asked = s.text;
    return text("1. a");
  });
  init_symbols("basophil", cfg, capture);
  CHECK(asked == "In a picture, we see basophil. List 5 entities that can be seen that verify basophil.");
  auto pool = init_symbols("basophil", cfg, five);
  CHECK(pool.symbols.size() == 5);
  for (auto o : pool.origins) CHECK(o == SymbolOrigin::initial);

  auto dupes = bind(AgentRole::linguistic, [](const AgentEndpoint&, std::string_view, const Stimulus&) {
    return text("1. Dark granules\n2. dark granules.\n3. the dark granules\n4. lobed nucleus\n5. lobed nucleus");
  });
  CHECK(init_symbols("basophil", cfg, dupes).symbols.size() == 2);

  cfg.initial_symbols = 1;
  CHECK(init_symbols("basophil", cfg, five).symbols.size() == 1);

  auto refuse = bind(AgentRole::linguistic, [](const AgentEndpoint&, std::string_view, const Stimulus&) {
    return text("Sorry, I cannot help with that.");
  });
  CHECK_THROWS_AS(init_symbols("basophil", cfg, refuse), StageFailure);
}

TEST_CASE("explore grows the pool and carries context only when grounded") {
  ConceptSet concepts{"basophil", {SymbolAtom("dark granules")}, {}, 0};
  SymbolPool pool;
  pool.label = "basophil";
  pool.add(SymbolAtom("a"), SymbolOrigin::initial);
  std::vector<std::string> prompts;
  std::mutex mu;
  auto agent = bind(AgentRole::linguistic, [&](const AgentEndpoint& ep, std::string_view, const Stimulus& s) {
    std::lock_guard lock(mu);
    CHECK(ep.temperature == 0.7);
    prompts.push_back(s.text);
    return text("[CONDITION] is b.");
  });
  auto cfg = quick_config();
  cfg.explore_iterations = 1;
  auto grown = explore("basophil", concepts, pool, cfg, agent);
  CHECK(grown.sorted_names() == std::vector<std::string>{"a", "b"});
  CHECK(grown.origin("b") == SymbolOrigin::explored);
  REQUIRE(prompts.size() == 1);
  CHECK(prompts[0] ==
        "We know that for basophil, we generally observe dark granules. Based on this, in a picture, if a AND "
        "[CONDITION] THEN basophil. What is [CONDITION]?");

  prompts.clear();
  cfg.grounded = false;
  explore("basophil", concepts, pool, cfg, agent);
  REQUIRE(prompts.size() == 1);
  CHECK(prompts[0] == "In a picture, if a AND [CONDITION] THEN basophil. What is [CONDITION]?");
  CHECK(prompts[0].find("generally observe") == std::string::npos);

  auto junk = bind(AgentRole::linguistic, [](const AgentEndpoint&, std::string_view, const Stimulus&) {
    return text("...");
  });
  CHECK_THROWS_AS(explore("basophil", concepts, pool, cfg, junk), StageFailure);
}

TEST_CASE("explore on a hallucination-free world stays inside the vocabulary") {
  WorldSpec spec;
  spec.eta_grounded = spec.eta_ungrounded = 0.0;
  auto s = synth_setup(spec);
  auto cfg = quick_config();
  const auto& y = s.world.labels[0];
  auto concepts = extract_concepts(s.manifest, y, cfg, s.agents.visual);
  auto pool = explore(y, concepts, init_symbols(y, cfg, s.agents.linguistic), cfg, s.agents.linguistic);
  CHECK(pool.symbols.size() > 1);
  for (const auto& name : pool.sorted_names()) CHECK(s.world.is_true_symbol(y, name));
}

TEST_CASE("candidate enumeration") {
  std::vector<std::string> three = {"a", "b", "c"};
  auto c = enumerate_candidates(three, 3, 64);
  CHECK(c.size() == 7);
  CHECK(c == std::vector<std::vector<std::string>>{
                 {"a"}, {"b"}, {"c"}, {"a", "b"}, {"a", "c"}, {"b", "c"}, {"a", "b", "c"}});
  CHECK(candidate_count(3, 3) == 7);
  CHECK(enumerate_candidates(three, 2, 0).size() == 6);
  CHECK(enumerate_candidates(three, 3, 4).size() == 4);
  std::vector<std::string> ten;
  for (char ch = 'a'; ch < 'k'; ++ch) ten.emplace_back(1, ch);
  for (int k = 1; k <= 4; ++k) CHECK(enumerate_candidates(ten, k, 0).size() == candidate_count(10, k));
  CHECK(candidate_count(10, 3) == 10 + 45 + 120);
}

TEST_CASE("form_and_filter_rules applies a strict threshold") {
  ConceptSet concepts{"basophil", {SymbolAtom("dark granules")}, {}, 0};
  SymbolPool pool;
  pool.label = "basophil";
  pool.add(SymbolAtom("a"), SymbolOrigin::initial);
  pool.add(SymbolAtom("b"), SymbolOrigin::explored);
  pool.add(SymbolAtom("c"), SymbolOrigin::initial);
  std::map<std::string, std::string> answers = {{"a", "(D)"},          {"b", "(C) 0.7"},  {"c", "(E)"},
                                                {"a AND b", "(B)"},    {"a AND c", "D"},  {"b AND c", "maybe B or D"},
                                                {"a AND b AND c", "(A)"}};
  std::atomic<int> calls{0};
  auto agent = bind(AgentRole::linguistic, [&](const AgentEndpoint& ep, std::string_view, const Stimulus& s) {
    ++calls;
    CHECK(ep.temperature == 0.0);
    auto body = s.text.substr(s.text.find("Given ") + 6);
    body = body.substr(0, body.find(", how likely"));
    CHECK(s.text.rfind("We know dark granules is responsible for basophil. Given ", 0) == 0);
    return text(answers.at(body));
  });
  auto cfg = quick_config();
  RuleFormationStats st;
  auto rules = form_and_filter_rules("basophil", concepts, pool, cfg, agent, &st);
  CHECK(calls == 7);
  CHECK(st.candidates == 7);
  CHECK(st.ambiguous == 1);
  REQUIRE(rules.size() == 3);
  CHECK(print_rule(rules[0]) == "basophil :- c");
  CHECK(rules[0].entailment == 0.95);
  CHECK(rules[0].provenance == Provenance::initial);
  CHECK(print_rule(rules[1]) == "basophil :- a");
  CHECK(rules[1].entailment == 0.9);
  CHECK(print_rule(rules[2]) == "basophil :- a AND c");

  cfg.grounded = false;
  auto ungrounded = bind(AgentRole::linguistic, [&](const AgentEndpoint&, std::string_view, const Stimulus& s) {
    CHECK(s.text.rfind("Given ", 0) == 0);
    return text("(E)");
  });
  CHECK(form_and_filter_rules("basophil", concepts, pool, cfg, ungrounded).size() == 7);
}

TEST_CASE("entailment aggregation over samples") {
  ConceptSet concepts{"y", {SymbolAtom("a")}, {}, 0};
  SymbolPool pool;
  pool.label = "y";
  pool.add(SymbolAtom("a"), SymbolOrigin::initial);
  // Samples alternate 0.5, 0.95, 0.95: mean 0.8, max 0.95.
  auto agent = bind(AgentRole::linguistic, [](const AgentEndpoint&, std::string_view, const Stimulus& s) {
    return text(s.sample_index == 0 ? "(B)" : "(E)");
  });
  auto cfg = quick_config();
  cfg.entail_samples = 3;
  CHECK(form_and_filter_rules("y", concepts, pool, cfg, agent).empty());
  cfg.aggregation = Aggregation::max;
  CHECK(form_and_filter_rules("y", concepts, pool, cfg, agent).at(0).entailment == 0.95);
  cfg.aggregation = Aggregation::mean;
  CHECK(*form_and_filter_rules("y", concepts, pool, cfg, agent).at(0).entailment == doctest::Approx(0.8));
}

TEST_CASE("counterfactual augmentation") {
  RuleSet rs;
  rs.dataset = "blood";
  rs.labels = {"basophil", "lymphocyte"};
  rs.rules = {make_conjunction("basophil", {"lobed nucleus", "dark granules"}, 0.95),
              make_conjunction("lymphocyte", {"nucleus is round and central"}, 0.9)};
  auto before = ruleset_to_json(rs);
  auto plus = augment_counterfactual(rs, 7);
  CHECK(ruleset_to_json(rs) == before);
  REQUIRE(plus.rules.size() == 2);
  const auto* baso = plus.rules_for("basophil").at(0);
  CHECK(baso->provenance == Provenance::counterfactual);
  REQUIRE(baso->groups.size() == 2);
  CHECK(baso->groups[0].size() == 2);
  CHECK(baso->groups[0][0].negated);
  CHECK(baso->groups[0][0].symbol.canonical() == "nucleus is round and central");
  CHECK(baso->groups[0][1].symbol.canonical() == "lobed nucleus");
  // Only one foreign symbol exists, so the second group stays plain.
  CHECK(baso->groups[1].size() == 1);
  const auto* lym = plus.rules_for("lymphocyte").at(0);
  CHECK(lym->groups[0].size() == 2);
  CHECK(lym->groups[0][0].negated);
  CHECK(ruleset_to_json(augment_counterfactual(rs, 7)) == ruleset_to_json(plus));
  plus.validate();

  RuleSet single;
  single.dataset = "x";
  single.labels = {"basophil"};
  single.rules = {make_conjunction("basophil", {"a"}, 0.9)};
  auto same = augment_counterfactual(single, 1);
  CHECK(ruleset_to_json(same) == ruleset_to_json(single));
}

TEST_CASE("counterfactual symbols always come from other classes") {
  auto s = synth_setup(WorldSpec{});
  auto cfg = quick_config();
  cfg.explore_iterations = 2;
  cfg.images_per_class = 5;
  auto build = build_rules(s.manifest, cfg, s.agents);
  auto plus = augment_counterfactual(build.rules, 3);
  std::map<std::string, std::set<std::string>> own;
  for (const auto& r : build.rules.rules)
    for (const auto& sym : r.symbols()) own[r.label].insert(sym);
  for (const auto& r : plus.rules) {
    for (const auto& g : r.groups) {
      for (const auto& lit : g) {
        if (!lit.negated) continue;
        CHECK_FALSE(own[r.label].count(lit.symbol.canonical()));
        bool elsewhere = false;
        for (const auto& [label, syms] : own) elsewhere |= label != r.label && syms.count(lit.symbol.canonical());
        CHECK(elsewhere);
      }
    }
  }
}

TEST_CASE("augmented rules never score below the original on the 0.1 grid") {
  // rule [a] AND [b] becomes (NOT x OR a) AND (NOT y OR b); enumerate every
  // grid assignment and compare with the brute-force evaluator.
  auto orig = parse_rule("y :- a AND b");
  auto aug = parse_rule("y :- (NOT x OR a) AND (NOT z OR b)");
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; b <= 10; ++b)
      for (int x = 0; x <= 10; ++x)
        for (int z = 0; z <= 10; ++z) {
          ScoreTable t{{"a", a / 10.0}, {"b", b / 10.0}, {"x", x / 10.0}, {"z", z / 10.0}};
          double o = eval_rule(orig, t), v = eval_rule(aug, t);
          REQUIRE(v >= o);
          if (x <= 5 && z <= 5) REQUIRE(v >= 0.5);
        }
}

TEST_CASE("verify_image issues one call per distinct symbol") {
  auto m = tiny_manifest(1);
  RuleSet rs;
  rs.labels = {"basophil", "eosinophil"};
  rs.rules = {make_conjunction("basophil", {"lobed nucleus", "dark granules"}, 0.9),
              make_conjunction("eosinophil", {"lobed nucleus", "orange granules"}, 0.9)};
  std::map<std::string, int> asked;
  std::mutex mu;
  auto verifier = bind(AgentRole::verifier, [&](const AgentEndpoint& ep, std::string_view, const Stimulus& s) {
    std::lock_guard lock(mu);
    CHECK(ep.request_logprobs);
    auto sym = s.text.substr(s.text.find("show ") + 5);
    sym = sym.substr(0, sym.find('?'));
    ++asked[sym];
    return yes_no(sym == "orange granules" ? 0.2 : 0.9);
  });
  auto v = verify_image(m, m.items[0], rs, verifier, quick_config());
  CHECK(v.calls == 3);
  CHECK(asked.size() == 3);
  for (const auto& [_, n] : asked) CHECK(n == 1);
  CHECK(v.s2[0] == doctest::Approx(0.9));
  CHECK(v.s2[1] == doctest::Approx(0.2));
}

TEST_CASE("verification degrades gracefully and fails past the limit") {
  auto m = tiny_manifest(1);
  RuleSet rs;
  rs.labels = {"basophil", "eosinophil"};
  rs.rules = {make_conjunction("basophil", {"a", "b"}, 0.9), make_conjunction("eosinophil", {"c"}, 0.9)};
  auto partly = bind(AgentRole::verifier, [](const AgentEndpoint&, std::string_view, const Stimulus& s) {
    if (s.text.find("show a?") != std::string::npos) return AgentReply{"Yes", {{"Yes", -0.01}}};
    return yes_no(0.7);
  });
  auto v = verify_image(m, m.items[0], rs, partly, quick_config());
  CHECK(v.degraded == 1);
  CHECK(v.scores.at("a") == doctest::Approx(1.0 / (1.0 + std::exp(-4.6))));

  auto useless = bind(AgentRole::verifier, [](const AgentEndpoint&, std::string_view, const Stimulus&) {
    return AgentReply{"I think so", {{"I", -0.1}, {".", -3.0}}};
  });
  CHECK_THROWS_AS(verify_image(m, m.items[0], rs, useless, quick_config()), VerificationFailure);
  CHECK(read_yes_no(AgentReply{"No.", {{"Nope", -0.1}}}, 4.6).p == doctest::Approx(1.0 - 1.0 / (1.0 + std::exp(-4.6))));
  CHECK(read_yes_no(AgentReply{"Hmm", {}}, 4.6).p == 0.5);
}

TEST_CASE("fuse") {
  std::vector<std::string> labels = {"basophil", "eosinophil"};
  auto p = fuse(labels, {0.48, 0.52}, {0.95, 0.40}, 0.5);
  CHECK(std::abs(p.fused[0] - 0.715) <= 1e-9);
  CHECK(p.argmax == "basophil");
  CHECK(fuse(labels, {0.48, 0.52}, {0.95, 0.40}, 0.0).argmax == "eosinophil");
  CHECK(fuse(labels, {0.7, 0.3}, {0.1, 0.2}, 1.0).argmax == "eosinophil");
  CHECK(fuse(labels, {0.5, 0.5}, {0.3, 0.3}, 0.5).argmax == "basophil");
  CHECK(fuse({"zeta", "alpha"}, {0.5, 0.5}, {0.3, 0.3}, 0.5).argmax == "alpha");
  CHECK_THROWS_AS(fuse(labels, {1.0}, {0.1, 0.2}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(fuse(labels, {0.6, 0.6}, {0.1, 0.2}, 0.5), std::invalid_argument);

  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    double a = rng.uniform(), b = rng.uniform(), c = rng.uniform(), lam = rng.uniform();
    auto f = fuse(labels, {a, 1 - a}, {b, c}, lam);
    CHECK(f.fused[0] == (1 - lam) * a + lam * b);
    double bump = rng.uniform(0.0, 1.0 - b);
    CHECK(fuse(labels, {a, 1 - a}, {b + bump, c}, lam).fused[0] >= f.fused[0]);
    CHECK(fuse(labels, {a, 1 - a}, {b, c}, 0.0).argmax == labels[argmax_label(labels, {a, 1 - a})]);
    CHECK(fuse(labels, {a, 1 - a}, {b, c}, 1.0).argmax == labels[argmax_label(labels, {b, c})]);
  }
}

TEST_CASE("classify_system1") {
  auto m = tiny_manifest(1);
  auto even = bind(AgentRole::system1, [](const AgentEndpoint&, std::string_view, const Stimulus&) {
    return yes_no(0.3);
  });
  auto v = classify_system1(m, m.items[0], m.classes, even, quick_config());
  CHECK(v == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(classify_system1(m, m.items[0], {"basophil"}, even, quick_config()), std::invalid_argument);

  for (double diag : {1.0, 0.6}) {
    WorldSpec spec;
    spec.s1_diagonal = diag;
    spec.train_per_class = 0;
    spec.test_per_class = 100;
    auto s = synth_setup(spec);
    std::size_t ok = 0, n = 0;
    for (const auto* item : s.manifest.split_items("test")) {
      auto s1 = classify_system1(s.manifest, *item, s.world.labels, s.agents.system1, quick_config());
      ok += s.world.labels[argmax_label(s.world.labels, s1)] == item->label;
      ++n;
    }
    CHECK(n == 500);
    if (diag == 1.0) {
      CHECK(ok == n);
    } else {
      CHECK(std::abs(ok / double(n) - 0.6) <= 0.05);
    }
  }
}

TEST_CASE("noiseless separating world classifies perfectly with lambda 1") {
  WorldSpec spec;
  spec.sigma = 0.0;
  spec.eta_grounded = spec.eta_ungrounded = 0.0;
  spec.core_presence_lo = spec.core_presence_hi = 1.0;
  auto s = synth_setup(spec);
  auto cfg = quick_config();
  cfg.images_per_class = 10;
  cfg.explore_iterations = 2;
  cfg.lambda = 1.0;
  auto build = build_rules(s.manifest, cfg, s.agents);
  for (const auto& y : s.world.labels) CHECK_FALSE(build.rules.rules_for(y).empty());
  auto preds = infer_split(s.manifest, "test", build.rules, s.agents.verifier, s.agents.system1, cfg);
  CHECK(preds.size() == 100);
  CHECK(accuracy_of(preds) == 1.0);
  for (const auto& p : preds) {
    CHECK(p.s2[s.world.label_index(p.truth)] == 1.0);
    double sum = 0;
    for (double x : p.s1) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("end-to-end determinism and symbol provenance") {
  auto cfg = quick_config();
  cfg.images_per_class = 10;
  cfg.explore_iterations = 3;
  cfg.seed = 5;
  auto run = [&] {
    auto s = synth_setup(WorldSpec{});
    auto b = build_rules(s.manifest, cfg, s.agents);
    auto preds = infer_split(s.manifest, "test", b.rules, s.agents.verifier, s.agents.system1, cfg);
    PredictionSet ps{s.manifest.name, "test", cfg.lambda, b.rules.labels, preds};
    return std::make_tuple(concepts_to_json(s.manifest.name, b.concepts), symbols_to_json(s.manifest.name, b.pools),
                           ruleset_to_json(b.rules), predictions_to_json(ps), b);
  };
  auto [c1, p1, r1, q1, build] = run();
  auto [c2, p2, r2, q2, build2] = run();
  CHECK(c1.dump() == c2.dump());
  CHECK(p1.dump() == p2.dump());
  CHECK(r1.dump() == r2.dump());
  CHECK(q1.dump() == q2.dump());

  for (const auto& r : build.rules.rules) {
    const SymbolPool* pool = nullptr;
    for (const auto& p : build.pools)
      if (p.label == r.label) pool = &p;
    REQUIRE(pool);
    for (const auto& sym : r.symbols()) CHECK(pool->contains(SymbolAtom(sym)));
    CHECK(*r.entailment > cfg.epsilon);
  }

  // Artifacts read back unchanged.
  CHECK(concepts_to_json("synthworld", concepts_from_json(c1)) == c1);
  CHECK(symbols_to_json("synthworld", symbols_from_json(p1)) == p1);
  CHECK(predictions_to_json(predictions_from_json(q1)) == q1);
  auto broken = q1;
  broken["predictions"][0]["s1"] = {0.5};
  CHECK_THROWS_WITH_AS(predictions_from_json(broken), doctest::Contains("predictions[0]"), SchemaError);
}

TEST_CASE("agent calls scale with images and classes") {
  for (int classes : {2, 4}) {
    for (int n : {3, 6}) {
      WorldSpec spec;
      spec.classes = classes;
      spec.train_per_class = 10;
      auto s = synth_setup(spec);
      auto cfg = quick_config();
      cfg.images_per_class = n;
      extract_all_concepts(s.manifest, cfg, s.agents.visual);
      CHECK(s.counter->calls(AgentRole::visual_concept) == static_cast<std::size_t>(n * classes));
    }
  }
}
