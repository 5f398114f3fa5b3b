#include "crn/synthworld/oracle_agent.hpp"

#include "crn/errors.hpp"
#include "crn/agents/parsers.hpp"
#include "crn/rulecore/dsl.hpp"
#include "crn/rulecore/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace crn {
namespace {

constexpr double kFloorLogprob = -1000.0;

std::optional<std::string> between(std::string_view text, std::string_view open, std::string_view close) {
  auto a = text.find(open);
  if (a == std::string_view::npos) return std::nullopt;
  a += open.size();
  auto b = text.find(close, a);
  if (b == std::string_view::npos) return std::nullopt;
  return std::string(text.substr(a, b - a));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(", ", start);
    auto item = canonical_text(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 2;
  }
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kFloorLogprob; }

AgentReply yes_no_reply(double p) {
  AgentReply r;
  r.text = p >= 0.5 ? "Yes" : "No";
  r.first_token_alternatives = {{"Yes", safe_log(p)}, {"No", safe_log(1.0 - p)}};
  if (p < 0.5) std::swap(r.first_token_alternatives[0], r.first_token_alternatives[1]);
  return r;
}

std::string numbered(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += std::to_string(i + 1) + ". " + items[i] + "\n";
  return out;
}

char option_letter(double plausibility) {
  if (plausibility >= 0.95) return 'E';
  if (plausibility >= 0.9) return 'D';
  if (plausibility >= 0.7) return 'C';
  if (plausibility >= 0.5) return 'B';
  return 'A';
}

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[static_cast<std::size_t>(rng.below(v.size()))];
}

}  // namespace

double oracle_verifier(const World& world, const SynthImage& image, const std::string& symbol, Rng& rng) {
  const double sigma = world.spec.sigma;
  double evidence;
  auto it = image.evidence.find(symbol);
  if (it != image.evidence.end()) {
    evidence = it->second;
  } else {
    Rng fixed(derive_seed(world.spec.seed, "unknown:" + image.id + "|" + symbol));
    evidence = fixed.uniform(0.0, sigma);
  }
  double noise = rng.uniform(-sigma, sigma);
  return std::clamp(evidence + noise, 0.0, 1.0);
}

Proposal oracle_linguistic(const World& world, const std::string& label,
                           const std::optional<std::vector<std::string>>& concepts, const std::string& exclude,
                           Rng& rng) {
  double eta = concepts ? world.spec.eta_grounded : world.spec.eta_ungrounded;
  auto without = [&](std::vector<std::string> v) {
    std::erase(v, exclude);
    return v;
  };
  if (rng.bernoulli(eta)) {
    auto d = without(world.distractors.at(label));
    if (d.empty()) d = world.distractors.at(label);
    return {pick(d, rng), true};
  }
  auto vocab = without(world.true_vocabulary(label));
  if (concepts && rng.bernoulli(world.spec.concept_bias)) {
    std::vector<std::string> preferred;
    for (const auto& c : *concepts)
      if (contains(vocab, c)) preferred.push_back(c);
    if (!preferred.empty()) return {pick(preferred, rng), false};
  }
  if (vocab.empty()) vocab = world.true_vocabulary(label);
  return {pick(vocab, rng), false};
}

double oracle_plausibility(const World& world, const std::string& label, const std::string& symbol,
                           const std::optional<std::vector<std::string>>& concepts) {
  auto kind = world.kind(symbol);
  if (!kind) return 0.1;
  if (*kind == SymbolKind::shared) return 0.5;
  bool own = world.owner(symbol) == label;
  if (*kind == SymbolKind::core) return own ? 1.0 : 0.1;
  // A distractor of the class reads as plausible without visual context;
  // with context it is only believed when the concepts vouch for it.
  if (!own) return 0.1;
  if (!concepts) return 0.9;
  return contains(*concepts, symbol) ? 0.9 : 0.5;
}

AgentReply OracleAgent::do_complete(const AgentEndpoint& ep, std::string_view, const Stimulus& stimulus) {
  Rng rng(derive_seed(world_.spec.seed, std::string(to_string(ep.role)) + "|" + stimulus.text + "|" +
                                            stimulus_digest(stimulus) + "|" +
                                            std::to_string(stimulus.sample_index)));
  switch (ep.role) {
    case AgentRole::visual_concept: return concepts_reply(stimulus, rng);
    case AgentRole::linguistic: return linguistic_reply(stimulus, rng);
    case AgentRole::verifier: return verifier_reply(stimulus, rng);
    case AgentRole::system1: return system1_reply(stimulus);
  }
  throw MalformedRequest("unsupported role");
}

AgentReply OracleAgent::concepts_reply(const Stimulus& s, Rng& rng) const {
  if (!s.synth) throw MalformedRequest("oracle concept agent needs a synthetic image");
  auto label = between(s.text, "we see ", ". List ");
  auto count = between(s.text, ". List ", " visual concepts");
  if (!label || !count) return AgentReply{"I cannot tell what to list.", {}};
  int n = std::max(1, std::atoi(count->c_str()));
  std::string y = canonical_text(*label);

  std::vector<std::pair<double, std::string>> seen;
  for (const auto& [sym, present] : s.synth->presence)
    if (present) seen.emplace_back(-s.synth->evidence.at(sym), sym);
  std::sort(seen.begin(), seen.end());
  std::vector<std::string> items;
  const auto* distract = world_.distractors.count(y) ? &world_.distractors.at(y) : nullptr;
  for (const auto& [_, sym] : seen) {
    if (static_cast<int>(items.size()) == n) break;
    if (distract && rng.bernoulli(world_.spec.concept_noise)) {
      items.push_back(pick(*distract, rng));
    } else {
      items.push_back(sym);
    }
  }
  if (items.empty()) return AgentReply{"I cannot see anything notable in this picture.", {}};
  return AgentReply{numbered(items), {}};
}

AgentReply OracleAgent::linguistic_reply(const Stimulus& s, Rng& rng) const {
  const std::string& t = s.text;
  if (t.find("entities that can be seen that verify") != std::string::npos) {
    auto label = between(t, "we see ", ". List ");
    auto count = between(t, ". List ", " entities");
    if (!label || !count || !world_.core.count(canonical_text(*label))) return {"I am not sure.", {}};
    std::string y = canonical_text(*label);
    int n = std::max(1, std::atoi(count->c_str()));
    std::vector<std::string> items;
    for (int i = 0; i < n; ++i) items.push_back(oracle_linguistic(world_, y, std::nullopt, "", rng).symbol);
    return AgentReply{numbered(items), {}};
  }
  if (t.find("What is [CONDITION]?") != std::string::npos) {
    auto label = between(t, "THEN ", ". What is");
    auto sym = between(t, "picture, if ", " AND [CONDITION]");
    if (!label || !sym || !world_.core.count(canonical_text(*label))) return {"I am not sure.", {}};
    std::optional<std::vector<std::string>> concepts;
    if (auto c = between(t, "generally observe ", ". Based on this")) concepts = split_list(*c);
    auto p = oracle_linguistic(world_, canonical_text(*label), concepts, canonical_text(*sym), rng);
    return AgentReply{"[CONDITION] is " + p.symbol + ".", {}};
  }
  if (t.find("Choose from the following options") != std::string::npos) {
    auto label = between(t, "how likely is ", "? Choose");
    auto rule_text = between(t, "Given ", ", how likely");
    if (!label || !rule_text) return {"I am not sure.", {}};
    std::optional<std::vector<std::string>> concepts;
    if (auto c = between(t, "We know ", " is responsible for ")) concepts = split_list(*c);
    std::string y = canonical_text(*label);
    double plaus = 1.0;
    try {
      auto rule = parse_rule("x :- " + *rule_text, 64);
      for (const auto& g : rule.groups)
        for (const auto& lit : g) {
          double v = oracle_plausibility(world_, y, lit.symbol.canonical(), concepts);
          plaus = std::min(plaus, lit.negated ? 1.0 - v : v);
        }
    } catch (const Error&) {
      return {"The rule is unclear to me.", {}};
    }
    char letter = option_letter(plaus);
    char buf[32];
    std::snprintf(buf, sizeof buf, "(%c) %g", letter, kEntailmentOptions[letter - 'A']);
    return AgentReply{buf, {}};
  }
  if (t.find("Output only a single probability value") != std::string::npos) {
    auto label = between(t, " in predicting ", " for a ");
    auto syms = between(t, "How likely are ", " in predicting ");
    if (!label || !syms) return {"I am not sure.", {}};
    auto list = split_list(*syms);
    if (list.empty()) return {"I am not sure.", {}};
    double sum = 0;
    for (const auto& sym : list) sum += oracle_plausibility(world_, canonical_text(*label), sym, std::nullopt);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", sum / static_cast<double>(list.size()));
    return AgentReply{buf, {}};
  }
  return AgentReply{"I am not sure what you are asking.", {}};
}

AgentReply OracleAgent::verifier_reply(const Stimulus& s, Rng& rng) const {
  if (!s.synth) throw MalformedRequest("oracle verifier needs a synthetic image");
  auto sym = between(s.text, "Does this image show ", "? Answer");
  if (!sym) return AgentReply{"Unclear", {{"Unclear", -0.1}, {".", -2.0}}};
  return yes_no_reply(oracle_verifier(world_, *s.synth, canonical_text(*sym), rng));
}

AgentReply OracleAgent::system1_reply(const Stimulus& s) const {
  if (!s.synth) throw MalformedRequest("oracle system-1 agent needs a synthetic image");
  auto asked = between(s.text, "Does this image show ", "? Answer");
  if (!asked) return AgentReply{"Unclear", {{"Unclear", -0.1}, {".", -2.0}}};
  std::string y = canonical_text(*asked);
  auto truth = world_.label_index(s.synth->label);
  std::size_t c = world_.labels.size();

  Rng rng(derive_seed(world_.spec.seed, "system1:" + s.synth->id));
  const auto& row = world_.confusion[truth];
  double u = rng.uniform(), acc = 0;
  std::size_t guess = c - 1;
  for (std::size_t j = 0; j < c; ++j) {
    acc += row[j];
    if (u < acc) {
      guess = j;
      break;
    }
  }
  auto it = std::find(world_.labels.begin(), world_.labels.end(), y);
  if (it == world_.labels.end()) return yes_no_reply(0.0);
  double conf = world_.spec.s1_confidence;
  double v = static_cast<std::size_t>(it - world_.labels.begin()) == guess
                 ? conf
                 : (c > 1 ? (1.0 - conf) / static_cast<double>(c - 1) : conf);
  return yes_no_reply(v);
}

}  // namespace crn
