#include <doctest.h>

#include "crn/agents/caching_agent.hpp"
#include "crn/agents/parsers.hpp"
#include "crn/agents/prompts.hpp"
#include "crn/agents/transcript_agent.hpp"
#include "crn/agents/yes_no.hpp"
#include "crn/errors.hpp"
#include "crn/util/rng.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

using namespace crn;
namespace fs = std::filesystem;

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(fs::path(CRN_TEST_DATA_DIR) / "golden" / (name + ".txt"), std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  auto s = ss.str();
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

PromptBindings full_bindings() {
  PromptBindings b;
  b.label = "basophil";
  b.count = 5;
  b.concepts = std::vector<std::string>{"lobed nucleus", "dark granules"};
  b.symbol = "lobed nucleus";
  b.rule = "lobed nucleus AND dark granules";
  b.task = "blood cell";
  b.symbols = std::vector<std::string>{"lobed nucleus", "dark granules"};
  return b;
}

AgentReply alternatives(std::vector<TokenAlternative> alts, std::string text = "") {
  return AgentReply{std::move(text), std::move(alts)};
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("crn_agents_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("prompt templates render byte-exact against golden files") {
  auto b = full_bindings();
  CHECK(render_prompt(TemplateId::concepts, b) == golden("concept"));
  CHECK(render_prompt(TemplateId::init_symbols, b) == golden("init_symbols"));
  CHECK(render_prompt(TemplateId::explore, b) == golden("explore"));
  CHECK(render_prompt(TemplateId::entail, b) == golden("entail"));
  CHECK(render_prompt(TemplateId::verify, b) == golden("verify"));
  CHECK(render_prompt(TemplateId::representativeness, b) == golden("representativeness"));

  auto u = b;
  u.concepts.reset();
  CHECK(render_prompt(TemplateId::explore, u) == golden("explore_ungrounded"));
  CHECK(render_prompt(TemplateId::entail, u) == golden("entail_ungrounded"));
  // Concept and IS prompts carry no visual context either way.
  CHECK(render_prompt(TemplateId::init_symbols, u) == golden("init_symbols"));
}

TEST_CASE("verify prompt example") {
  PromptBindings b;
  b.task = "blood cell";
  b.symbol = "lobed nucleus";
  CHECK(render_prompt(TemplateId::verify, b) ==
        "In the image we can see a blood cell. Does this image show lobed nucleus? Answer in Yes or No.");
}

TEST_CASE("render_prompt reports unbound placeholders") {
  PromptBindings b;
  b.label = "basophil";
  b.concepts = std::vector<std::string>{"x"};
  CHECK_THROWS_AS(render_prompt(TemplateId::explore, b), UnboundPlaceholder);
  try {
    render_prompt(TemplateId::explore, b);
  } catch (const UnboundPlaceholder& e) {
    CHECK(std::string(e.what()).find("{symbol}") != std::string::npos);
  }
  CHECK_THROWS_AS(render_prompt(TemplateId::verify, PromptBindings{}), UnboundPlaceholder);
}

TEST_CASE("render_prompt is deterministic and template names round-trip") {
  auto b = full_bindings();
  for (auto id : {TemplateId::concepts, TemplateId::init_symbols, TemplateId::explore, TemplateId::entail,
                  TemplateId::verify, TemplateId::representativeness}) {
    CHECK(render_prompt(id, b) == render_prompt(id, b));
    CHECK(template_from_string(to_string(id)) == id);
  }
  CHECK_THROWS_AS(template_from_string("nope"), ConfigError);
}

TEST_CASE("parse_concept_list") {
  auto names = [](const std::vector<SymbolAtom>& v) {
    std::vector<std::string> out;
    for (const auto& s : v) out.push_back(s.canonical());
    return out;
  };
  CHECK(names(parse_concept_list("1. Lobed nucleus\n2. Dark granules", 5)) ==
        std::vector<std::string>{"lobed nucleus", "dark granules"});
  CHECK(names(parse_concept_list("1. a1\n2. a2\n3. a3\n4. a4\n5. a5\n6. a6\n7. a7", 5)) ==
        std::vector<std::string>{"a1", "a2", "a3", "a4", "a5"});
  CHECK(names(parse_concept_list("Here are the concepts:\n- **Lobed nucleus**: two lobes\n* Dark granules\n"
                                 "- the lobed nucleus.",
                                 5)) == std::vector<std::string>{"lobed nucleus", "dark granules"});
  CHECK(names(parse_concept_list("lobed nucleus, dark granules, purple stain", 5)) ==
        std::vector<std::string>{"lobed nucleus", "dark granules", "purple stain"});
  CHECK(names(parse_concept_list("1) Runway\n2) Airplane - a vehicle", 3)) ==
        std::vector<std::string>{"runway", "airplane"});

  for (const char* refusal : {"I cannot see the image.", "Sorry, I am unable to view images.",
                              "I'm sorry, but I can't help with that.", "", "   \n  "}) {
    CAPTURE(refusal);
    CHECK_THROWS_AS(parse_concept_list(refusal, 5), EmptyConceptList);
  }
}

TEST_CASE("parse_symbol_reply") {
  CHECK(parse_symbol_reply("[CONDITION] is dark granules.").canonical() == "dark granules");
  CHECK(parse_symbol_reply("Dark granules").canonical() == "dark granules");
  CHECK_THROWS_AS(parse_symbol_reply("..."), UnparseableReply);
}

TEST_CASE("parse_entailment_choice") {
  const char* letters = "ABCDE";
  for (int i = 0; i < 5; ++i) {
    CHECK(parse_entailment_choice(std::string("(") + letters[i] + ")") == kEntailmentOptions[i]);
    CHECK(parse_entailment_choice(std::string(1, letters[i])) == kEntailmentOptions[i]);
  }
  CHECK(parse_entailment_choice("(D)") == 0.9);
  CHECK(parse_entailment_choice("I choose C, 0.7") == 0.7);
  CHECK(parse_entailment_choice("The answer is (E) 0.95.") == 0.95);
  CHECK(parse_entailment_choice("0.5") == 0.5);
  CHECK(parse_entailment_choice("A rule like this is (B).") == 0.5);
  CHECK_THROWS_AS(parse_entailment_choice("maybe B or D"), AmbiguousEntailment);
  CHECK_THROWS_AS(parse_entailment_choice("(C) 0.9"), AmbiguousEntailment);
  CHECK_THROWS_AS(parse_entailment_choice("no idea"), AmbiguousEntailment);
}

TEST_CASE("parse_probability") {
  CHECK(parse_probability("0.54") == doctest::Approx(0.54));
  CHECK(parse_probability("Probability: 54%") == doctest::Approx(0.54));
  CHECK(parse_probability("1") == 1.0);
  CHECK_THROWS_AS(parse_probability("1.7"), UnparseableReply);
  CHECK_THROWS_AS(parse_probability("likely"), UnparseableReply);
}

TEST_CASE("score_yes_no examples") {
  CHECK(score_yes_no(alternatives({{"Yes", -0.1}, {"No", -0.1}})).p_yes == 0.5);
  auto s = score_yes_no(alternatives({{"yes", 2.0}, {"no", 0.0}}));
  CHECK(s.p_yes == doctest::Approx(std::exp(2.0) / (std::exp(2.0) + 1.0)).epsilon(1e-12));
  CHECK(s.p_yes == doctest::Approx(0.8808).epsilon(1e-4));
  CHECK_FALSE(s.degraded);
  CHECK_THROWS_AS(score_yes_no(alternatives({{".", -0.1}, {",", -2.0}})), VerifierUnusable);
  CHECK_THROWS_AS(score_yes_no(alternatives({})), VerifierUnusable);
}

TEST_CASE("score_yes_no token matching and degraded fallback") {
  // Best-scoring surface form per side wins.
  auto s = score_yes_no(alternatives({{"\xE2\x96\x81Yes", -0.5}, {" yes", -3.0}, {"NO", -1.5}, {"Ġno", -0.9}}));
  CHECK(s.p_yes == doctest::Approx(yes_probability(-0.5, -0.9)));
  auto only_yes = score_yes_no(alternatives({{"Yes", -0.2}, {"Maybe", -1.0}}));
  CHECK(only_yes.degraded);
  CHECK(only_yes.p_yes == doctest::Approx(1.0 / (1.0 + std::exp(-kDefaultMissingTokenGap))));
  auto only_no = score_yes_no(alternatives({{"no", -0.2}}), 2.0);
  CHECK(only_no.degraded);
  CHECK(only_no.p_yes == doctest::Approx(1.0 / (1.0 + std::exp(2.0))));
  CHECK(normalize_token(" Yes.") == "yes");
}

TEST_CASE("yes/no complement sums to one exactly") {
  Rng rng(7);
  for (int i = 0; i < 20000; ++i) {
    double a = rng.uniform(-30.0, 0.0);
    double b = rng.uniform(-30.0, 0.0);
    CHECK(yes_probability(a, b) + yes_probability(b, a) == 1.0);
    auto ab = score_yes_no(alternatives({{"Yes", a}, {"No", b}})).p_yes;
    auto ba = score_yes_no(alternatives({{"Yes", b}, {"No", a}})).p_yes;
    REQUIRE(ab + ba == 1.0);
  }
}

TEST_CASE("endpoints validate and verifier requires alternatives") {
  auto v = make_endpoint(AgentRole::verifier, "http://x");
  CHECK(v.request_logprobs);
  CHECK(v.top_alternatives > 0);
  v.request_logprobs = false;
  CHECK_THROWS_AS(validate(v), ConfigError);
  auto l = make_endpoint(AgentRole::linguistic, "http://x");
  l.temperature = -1;
  CHECK_THROWS_AS(validate(l), ConfigError);
  CHECK(role_from_string("system1") == AgentRole::system1);
  CHECK_THROWS_AS(role_from_string("oracle"), ConfigError);
}

TEST_CASE("verifier reply without alternatives is malformed") {
  auto agent = std::make_shared<FunctionAgent>(
      [](const AgentEndpoint&, std::string_view, const Stimulus&) { return AgentReply{"Yes", {}}; });
  RoleBinding verifier{agent, make_endpoint(AgentRole::verifier, "mock:")};
  CHECK_THROWS_AS(verifier.ask("", Stimulus{"q"}), MalformedReply);
  RoleBinding linguistic{agent, make_endpoint(AgentRole::linguistic, "mock:")};
  CHECK(linguistic.ask("", Stimulus{"q"}).text == "Yes");
}

TEST_CASE("transcript agent replays recorded replies") {
  json doc = {{"entries",
               {{{"role", "verifier"},
                 {"prompt", "Does it?"},
                 {"stimulus", "synth:img1"},
                 {"reply", {{"text", "Yes"}, {"top_logprobs", {{{"token", "Yes"}, {"logprob", -0.3}}}}}}},
                {{"role", "linguistic"},
                 {"prompt", "Explore"},
                 {"sample_index", 1},
                 {"reply", {{"text", "round nucleus"}}}}}}};
  auto agent = std::make_shared<TranscriptAgent>(TranscriptAgent::from_json(doc));
  RoleBinding verifier{agent, make_endpoint(AgentRole::verifier, "transcript:x")};
  auto img = std::make_shared<SynthImage>();
  img->id = "img1";
  Stimulus st{"Does it?"};
  st.synth = img;
  auto r = verifier.ask("", st);
  CHECK(r.text == "Yes");
  REQUIRE(r.first_token_alternatives.size() == 1);
  CHECK(r.first_token_alternatives[0].logprob == -0.3);
  CHECK(verifier.ask("", st).text == r.text);

  img->id = "img2";
  CHECK_THROWS_AS(verifier.ask("", st), MalformedRequest);

  RoleBinding ling{agent, make_endpoint(AgentRole::linguistic, "transcript:x")};
  Stimulus ex{"Explore"};
  CHECK_THROWS_AS(ling.ask("", ex), MalformedRequest);
  ex.sample_index = 1;
  CHECK(ling.ask("", ex).text == "round nucleus");

  CHECK_THROWS_AS(TranscriptAgent::from_json(json{{"entries", {{{"role", "bad"}}}}}), SchemaError);
}

TEST_CASE("caching agent serves repeats from disk") {
  auto dir = scratch_dir("cache");
  auto inner = std::make_shared<CountingAgent>(std::make_shared<FunctionAgent>(
      [](const AgentEndpoint&, std::string_view, const Stimulus& s) {
        return AgentReply{"echo " + s.text + " " + std::to_string(s.sample_index), {{"Yes", -0.1}, {"No", -2.5}}};
      }));
  auto ep = make_endpoint(AgentRole::verifier, "mock:");
  {
    auto cache = std::make_shared<ResponseCache>(dir);
    auto agent = std::make_shared<CachingAgent>(inner, cache);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&, t] {
        for (int i = 0; i < 20; ++i) {
          Stimulus s{"q" + std::to_string(i)};
          s.sample_index = static_cast<unsigned>(t % 2);
          agent->complete(ep, "sys", s);
        }
      });
    }
    for (auto& th : threads) th.join();
    CHECK(agent->hits() + agent->misses() == 80);
    CHECK(inner->calls() >= 40);
  }
  auto before = inner->calls();
  auto agent = std::make_shared<CachingAgent>(inner, std::make_shared<ResponseCache>(dir));
  for (int i = 0; i < 20; ++i) {
    Stimulus s{"q" + std::to_string(i)};
    s.sample_index = 1;
    auto r = agent->complete(ep, "sys", s);
    CHECK(r.text == "echo q" + std::to_string(i) + " 1");
    CHECK(r.first_token_alternatives.size() == 2);
  }
  CHECK(inner->calls() == before);
  CHECK(agent->hits() == 20);
  CHECK(inner->calls(AgentRole::verifier) == inner->calls());

  auto hotter = with_temperature(ep, 0.7);
  CHECK(ResponseCache::key_for(ep, "sys", Stimulus{"q"}) != ResponseCache::key_for(hotter, "sys", Stimulus{"q"}));
  fs::remove_all(dir);
}
