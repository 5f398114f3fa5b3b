#include "oracles.hpp"

#include "crn/errors.hpp"
#include "crn/rulecore/dsl.hpp"
#include "crn/rulecore/eval.hpp"
#include "crn/rulecore/ruleset_json.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace crn;

namespace {

Rule to_rule(const test::RawFormula& f, const std::string& label = "c") {
  Rule r;
  r.label = label;
  for (const auto& g : f) {
    Group group;
    for (const auto& l : g) group.push_back(Literal{SymbolAtom(l.symbol), l.negated});
    r.groups.push_back(group);
  }
  return r;
}

}  // namespace

TEST_CASE("canonicalize normalizes case, spacing, articles and punctuation") {
  CHECK(canonicalize("The Lobed Nucleus.").canonical() == "lobed nucleus");
  CHECK(canonicalize("lobed   nucleus").canonical() == "lobed nucleus");
  CHECK(canonicalize("  An  Oval Shape ;").canonical() == "oval shape");
  CHECK(canonicalize("the a dark cell .").canonical() == "dark cell");
  CHECK(canonicalize("the").canonical() == "the");
  CHECK(canonicalize("The Lobed Nucleus.").raw() == "The Lobed Nucleus.");
  CHECK_THROWS_AS(canonicalize("..."), InvalidSymbol);
  CHECK_THROWS_AS(canonicalize("   "), InvalidSymbol);
  CHECK(canonicalize("Dark granules") == canonicalize("dark  granules!"));
}

TEST_CASE("canonicalize is idempotent") {
  std::mt19937_64 rng(11);
  const std::string alphabet = "aAbT he.,;:!?\"' n";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    int len = 1 + static_cast<int>(rng() % 14);
    for (int k = 0; k < len; ++k) s.push_back(alphabet[rng() % alphabet.size()]);
    auto once = canonical_text(s);
    CHECK(canonical_text(once) == once);
  }
}

TEST_CASE("parse_rule reads conjunctions and mixed groups") {
  auto r = parse_rule("basophil :- lobed nucleus AND dark granules");
  CHECK(r.label == "basophil");
  REQUIRE(r.groups.size() == 2);
  CHECK(r.groups[0].size() == 1);
  CHECK(r.groups[0][0].symbol.canonical() == "lobed nucleus");
  CHECK(r.groups[1][0].symbol.canonical() == "dark granules");

  auto m = parse_rule("basophil :- lobed nucleus AND (NOT round central nucleus OR dark granules)");
  REQUIRE(m.groups.size() == 2);
  REQUIRE(m.groups[1].size() == 2);
  CHECK(m.groups[1][0].negated);
  CHECK(m.groups[1][0].symbol.canonical() == "round central nucleus");
  CHECK_FALSE(m.groups[1][1].negated);
}

TEST_CASE("parse_rule errors") {
  CHECK_THROWS_AS(parse_rule("basophil :- a AND b AND c AND d"), RuleTooLong);
  CHECK_NOTHROW(parse_rule("basophil :- a AND b AND c AND d", 4));
  CHECK_THROWS_AS(parse_rule("basophil :- a AND The A."), DuplicateSymbol);
  CHECK_THROWS_AS(parse_rule("basophil lobed nucleus"), ParseError);
  CHECK_THROWS_AS(parse_rule(" :- a"), ParseError);
  CHECK_THROWS_AS(parse_rule("x :- a AND"), ParseError);
  CHECK_THROWS_AS(parse_rule("x :- (a OR b"), ParseError);
  CHECK_THROWS_AS(parse_rule("x :- (a AND b)"), ParseError);
  CHECK_THROWS_AS(parse_rule("x :- a OR b"), ParseError);
  CHECK_THROWS_AS(parse_rule("x :- NOT ..."), ParseError);

  try {
    parse_rule("x :- a AND AND b");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 12);
  }
  try {
    parse_rules("x :- a\n\ny :- b AND )");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 12);
  }
}

TEST_CASE("print_rule") {
  CHECK(print_rule(make_conjunction("basophil", {"a", "b"})) == "basophil :- a AND b");
  auto m = parse_rule("basophil :- lobed nucleus AND (NOT round central nucleus OR dark granules)");
  CHECK(print_rule(m) == "basophil :- lobed nucleus AND (NOT round central nucleus OR dark granules)");
  CHECK(print_rule(m).find("NOT ") != std::string::npos);

  Rule q = make_conjunction("c", {"nucleus (round)", "say \"hi\\"});
  auto text = print_rule(q);
  CHECK(text == "c :- \"nucleus (round)\" AND \"say \\\"hi\\\\\"");
  CHECK(same_formula(parse_rule(text), q));
}

TEST_CASE("print/parse round trip over generated rules") {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> words = {"lobed", "dark", "nucleus", "granule", "(round)", "and", "or",
                                          "not", "a", "x\\y", "\"q\"", "pale", "AND", "NOT"};
  int built = 0;
  while (built < 1000) {
    Rule r;
    r.label = "class " + std::to_string(rng() % 4);
    int ngroups = 1 + static_cast<int>(rng() % 3);
    std::vector<std::string> used;
    bool ok = true;
    for (int g = 0; g < ngroups && ok; ++g) {
      Group group;
      int width = 1 + static_cast<int>(rng() % 2);
      for (int l = 0; l < width; ++l) {
        std::string text;
        int nwords = 1 + static_cast<int>(rng() % 3);
        for (int w = 0; w < nwords; ++w) text += (w ? " " : "") + words[rng() % words.size()];
        auto canon = canonical_text(text);
        if (canon.empty() || std::find(used.begin(), used.end(), canon) != used.end()) {
          ok = false;
          break;
        }
        used.push_back(canon);
        group.push_back(Literal{SymbolAtom(text), (rng() & 1) != 0});
      }
      r.groups.push_back(group);
    }
    if (!ok) continue;
    ++built;
    auto printed = print_rule(r);
    auto reparsed = parse_rule(printed);
    REQUIRE_MESSAGE(same_formula(reparsed, r), printed);
    CHECK(print_rule(reparsed) == printed);
  }
}

TEST_CASE("eval_rule semantics") {
  ScoreTable s{{"a", 0.9}, {"b", 0.8}, {"c", 0.6}};
  CHECK(eval_rule(make_conjunction("k", {"a", "b"}), s) == 0.8);
  ScoreTable neg{{"b", 0.3}};
  CHECK(eval_rule(parse_rule("k :- NOT b"), neg) == doctest::Approx(0.7));
  // Frozen from the threshold-cut oracle: min(0.9, max(0.2, 0.6)).
  CHECK(eval_rule(parse_rule("k :- a AND (NOT b OR c)"), s) == 0.6);
  CHECK(test::threshold_cut_value({{{"a", false}}, {{"b", true}, {"c", false}}},
                                  {{"a", 0.9}, {"b", 0.8}, {"c", 0.6}}) == 0.6);
  CHECK_THROWS_AS(eval_rule(make_conjunction("k", {"a", "zzz"}), s), MissingScore);
}

TEST_CASE("ScoreTable rejects out-of-range values and missing lookups") {
  ScoreTable s;
  CHECK_THROWS_AS(s.set("a", 1.5), std::invalid_argument);
  CHECK_THROWS_AS(s.set("a", -0.1), std::invalid_argument);
  CHECK_THROWS_AS(s.set("a", std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(s.at("a"), MissingScore);
}

TEST_CASE("eval_rule matches the reference evaluators") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    auto f = test::random_formula(rng);
    std::map<std::string, double> p;
    std::map<std::string, bool> truth;
    ScoreTable fuzzy, boolean;
    for (int k = 0; k < 10; ++k) {
      auto name = "s" + std::to_string(k);
      p[name] = test::grid_value(rng);
      truth[name] = (rng() & 1) != 0;
      fuzzy.set(name, p[name]);
      boolean.set(name, truth[name] ? 1.0 : 0.0);
    }
    auto rule = to_rule(f);
    CHECK(eval_rule(rule, fuzzy) == test::threshold_cut_value(f, p));
    CHECK(eval_rule(rule, boolean) == (test::classical_value(f, truth) ? 1.0 : 0.0));
  }
}

TEST_CASE("eval_rule properties") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    auto f = test::random_formula(rng);
    auto rule = to_rule(f);
    ScoreTable s;
    for (int k = 0; k < 10; ++k) s.set("s" + std::to_string(k), test::grid_value(rng));
    double base = eval_rule(rule, s);
    CHECK(base >= 0.0);
    CHECK(base <= 1.0);

    // monotonicity
    const auto& lit = f[rng() % f.size()][0];
    ScoreTable raised = s;
    raised.set(lit.symbol, std::min(1.0, s.at(lit.symbol) + 0.3));
    if (lit.negated) {
      CHECK(eval_rule(rule, raised) <= base);
    } else {
      CHECK(eval_rule(rule, raised) >= base);
    }

    // duplicating a group is idempotent
    Rule dup = rule;
    dup.groups.push_back(rule.groups.front());
    CHECK(eval_rule(dup, s) == base);

    if (f.size() == 1) {
      double lo = 1.0, hi = 0.0;
      for (const auto& l : rule.groups[0]) {
        lo = std::min(lo, literal_value(l, s));
        hi = std::max(hi, literal_value(l, s));
      }
      CHECK(base >= lo);
      CHECK(base <= hi);
    }
  }
}

TEST_CASE("eval_class and system2_vector") {
  RuleSet rs;
  rs.dataset = "blood";
  rs.labels = {"basophil", "eosinophil", "empty"};
  rs.rules = {make_conjunction("basophil", {"a"}), make_conjunction("basophil", {"b", "c"}),
              make_conjunction("eosinophil", {"d"})};
  ScoreTable s{{"a", 0.4}, {"b", 0.95}, {"c", 0.97}, {"d", 0.4}};
  auto best = eval_class(rs, "basophil", s);
  CHECK(best.score == 0.95);
  REQUIRE(best.winner != nullptr);
  CHECK(print_rule(*best.winner) == "basophil :- b AND c");
  CHECK(eval_class(rs, "empty", s).score == 0.0);
  CHECK(eval_class(rs, "empty", s).winner == nullptr);
  CHECK_THROWS_AS(eval_class(rs, "monocyte", s), UnknownLabel);

  auto v = system2_vector(rs, s);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 0.95);
  CHECK(v[1] == 0.4);
  CHECK(v[2] == 0.0);

  auto n = system2_vector(rs, s, true);
  CHECK(n[0] + n[1] + n[2] == doctest::Approx(1.0));

  RuleSet one;
  one.labels = {"x"};
  one.rules = {make_conjunction("x", {"a"})};
  CHECK(system2_vector(one, s) == std::vector<double>{0.4});

  RuleSet sym;
  sym.labels = {"x", "y"};
  sym.rules = {make_conjunction("x", {"a"}), make_conjunction("y", {"a"})};
  CHECK(system2_vector(sym, s) == std::vector<double>{0.4, 0.4});

  ScoreTable missing{{"a", 0.1}};
  CHECK_THROWS_AS(system2_vector(rs, missing), MissingScore);
}

// Monotone transforms commute with min/max on the literal values, so the test
// uses positive literals where literal value == symbol score.
TEST_CASE("argmax of system2_vector is invariant under monotone transforms") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    RuleSet rs;
    rs.labels = {"p", "q", "r"};
    for (const auto& l : rs.labels) {
      for (int k = 0; k < 2; ++k) {
        auto f = test::random_formula(rng);
        for (auto& g : f) {
          for (auto& lit : g) lit.negated = false;
        }
        rs.rules.push_back(to_rule(f, l));
      }
    }
    ScoreTable s, t;
    for (int k = 0; k < 10; ++k) {
      double v = test::grid_value(rng);
      s.set("s" + std::to_string(k), v);
      t.set("s" + std::to_string(k), v * v * v);  // strictly increasing on [0,1]
    }
    auto a = system2_vector(rs, s);
    auto b = system2_vector(rs, t);
    for (std::size_t x = 0; x < 3; ++x) {
      for (std::size_t y = 0; y < 3; ++y) CHECK((a[x] < a[y]) == (b[x] < b[y]));
    }
  }
}

TEST_CASE("rule set JSON round trip and schema errors") {
  RuleSet rs;
  rs.dataset = "blood";
  rs.labels = {"basophil", "eosinophil"};
  rs.rules = {make_conjunction("basophil", {"a", "b"}, 0.9), make_conjunction("basophil", {"c"}, 0.95),
              parse_rule("eosinophil :- d AND (NOT a OR e)")};
  rs.rules.back().provenance = Provenance::counterfactual;
  auto doc = ruleset_to_json(rs);
  CHECK(doc["class_rules"][0]["rules"][0]["entailment"] == 0.95);
  CHECK(doc["class_rules"][1]["rules"][0]["entailment"].is_null());
  CHECK(doc["class_rules"][1]["rules"][0]["groups"][1][0]["negated"] == true);
  auto back = ruleset_from_json(doc);
  CHECK(ruleset_to_json(back) == doc);
  CHECK(back.rules[0].entailment == 0.95);

  auto bad = doc;
  bad["class_rules"][0]["rules"][1].erase("provenance");
  try {
    ruleset_from_json(bad);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("class_rules[0].rules[1].provenance") != std::string::npos);
  }
  bad = doc;
  bad["class_rules"][0]["label"] = "monocyte";
  CHECK_THROWS_AS(ruleset_from_json(bad), SchemaError);
  bad = doc;
  bad["class_rules"][0]["rules"][0]["groups"][0][0]["symbol"] = "...";
  CHECK_THROWS_AS(ruleset_from_json(bad), SchemaError);
}

TEST_CASE("RuleSet::normalize orders by entailment then text") {
  RuleSet rs;
  rs.labels = {"y", "x"};
  rs.rules = {make_conjunction("x", {"b"}, 0.9), make_conjunction("y", {"z"}, 0.7),
              make_conjunction("x", {"a"}, 0.9), make_conjunction("x", {"c"}, 0.95)};
  rs.normalize();
  std::vector<std::string> printed;
  for (const auto& r : rs.rules) printed.push_back(print_rule(r));
  CHECK(printed == std::vector<std::string>{"y :- z", "x :- c", "x :- a", "x :- b"});
}

