#include "crn/agents/parsers.hpp"

#include "crn/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <regex>
#include <set>
#include <string>

namespace crn {
namespace {

constexpr int kMaxSymbolWords = 10;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(start, end - start));
    if (!line.empty()) out.push_back(line);
    start = end + 1;
  }
  return out;
}

/// Length of a leading list marker ("1.", "2)", "-", "*", "•"), or 0.
std::size_t marker_length(std::string_view line) {
  std::size_t i = 0;
  if (line.starts_with("\xE2\x80\xA2")) {
    i = 3;
  } else if (!line.empty() && (line[0] == '-' || line[0] == '*' || line[0] == '+')) {
    if (line.starts_with("**")) return 0;
    i = 1;
  } else if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0]))) {
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || (line[i] != '.' && line[i] != ')' && line[i] != ':')) return 0;
    ++i;
  } else if (line.size() > 2 && line[0] == '(' && std::isdigit(static_cast<unsigned char>(line[1]))) {
    i = 1;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] != ')') return 0;
    ++i;
  } else {
    return 0;
  }
  if (i < line.size() && line[i] != ' ' && line[i] != '\t') return 0;
  return i;
}

std::string remove_all(std::string s, std::string_view what) {
  for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what)) s.erase(pos, what.size());
  return s;
}

/// Strips emphasis, descriptions after ": " / " - ", and wrapping quotes.
std::string clean_item(std::string_view raw) {
  std::string s = remove_all(remove_all(remove_all(std::string(raw), "**"), "__"), "`");
  for (std::string_view sep : {std::string_view(": "), std::string_view(" - "),
                               std::string_view(" \xE2\x80\x93 "), std::string_view(" \xE2\x80\x94 ")}) {
    auto pos = s.find(sep);
    if (pos != std::string::npos && pos > 0) s.erase(pos);
  }
  if (!s.empty() && s.back() == ':') s.pop_back();
  auto t = trim(s);
  while (!t.empty() && (t.front() == '"' || t.front() == '\'')) t.remove_prefix(1);
  return std::string(trim(t));
}

int word_count(std::string_view s) {
  int n = 0;
  bool in_word = false;
  for (char c : s) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::optional<SymbolAtom> to_symbol(std::string_view item) {
  auto cleaned = clean_item(item);
  if (cleaned.empty() || looks_like_refusal(cleaned) || word_count(cleaned) > kMaxSymbolWords) {
    return std::nullopt;
  }
  auto canon = canonical_text(cleaned);
  if (canon.empty()) return std::nullopt;
  return SymbolAtom(cleaned);
}

}  // namespace

bool looks_like_refusal(std::string_view text) {
  static constexpr std::array<std::string_view, 14> kPhrases{
      "i cannot",   "i can't",     "i can not",      "i am unable",     "i'm unable",
      "unable to",  "as an ai",    "sorry",          "i do not see",    "i don't see",
      "cannot see", "can't see",   "not able to",    "i apologize"};
  auto l = lower(text);
  return std::any_of(kPhrases.begin(), kPhrases.end(),
                     [&](std::string_view p) { return l.find(p) != std::string::npos; });
}

std::vector<SymbolAtom> parse_concept_list(std::string_view text, int max_items) {
  auto lines = split_lines(text);
  bool any_marker = std::any_of(lines.begin(), lines.end(), [](auto l) { return marker_length(l) > 0; });

  std::vector<std::string> items;
  if (any_marker) {
    for (auto l : lines) {
      if (auto n = marker_length(l)) items.emplace_back(trim(l.substr(n)));
    }
  } else if (!looks_like_refusal(text)) {
    if (lines.size() == 1 && lines[0].find(',') != std::string_view::npos) {
      std::string_view rest = lines[0];
      while (!rest.empty()) {
        auto pos = rest.find_first_of(",;");
        items.emplace_back(trim(rest.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        rest.remove_prefix(pos + 1);
      }
    } else {
      for (auto l : lines) {
        if (l.back() == ':') continue;  // "Here are the concepts:"
        items.emplace_back(l);
      }
    }
  }

  std::vector<SymbolAtom> out;
  for (const auto& item : items) {
    if (static_cast<int>(out.size()) >= max_items) break;
    auto sym = to_symbol(item);
    if (sym && std::find(out.begin(), out.end(), *sym) == out.end()) out.push_back(std::move(*sym));
  }
  if (out.empty()) throw EmptyConceptList("no concepts found in reply: \"" + std::string(trim(text)) + "\"");
  return out;
}

SymbolAtom parse_symbol_reply(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty() || looks_like_refusal(text)) {
    throw UnparseableReply("no symbol in reply: \"" + std::string(trim(text)) + "\"");
  }
  std::string_view line = lines.front();
  line = trim(line.substr(marker_length(line)));
  static constexpr std::array<std::string_view, 9> kPrefixes{
      "[condition] is ", "[condition] = ", "[condition]: ", "[condition]:", "condition: ",
      "condition is ",   "the condition is ", "answer: ",    "that "};
  bool stripped = true;
  while (stripped) {
    stripped = false;
    auto l = lower(line);
    for (auto p : kPrefixes) {
      if (l.starts_with(p)) {
        line = trim(line.substr(p.size()));
        stripped = true;
        break;
      }
    }
  }
  auto sym = to_symbol(line);
  if (!sym) throw UnparseableReply("no symbol in reply: \"" + std::string(trim(text)) + "\"");
  return *sym;
}

double parse_entailment_choice(std::string_view text) {
  std::set<int> choices;  // index into kEntailmentOptions
  auto letter_index = [](char c) { return c - 'A'; };
  auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c < 'A' || c > 'E') continue;
    char prev = i > 0 ? text[i - 1] : ' ';
    char next = i + 1 < text.size() ? text[i + 1] : ' ';
    if (prev == '(' && next == ')') {
      choices.insert(letter_index(c));
      continue;
    }
    if (alnum(prev) || alnum(next) || prev == '(' || next == ')') continue;
    // "A" followed by a lowercase word reads as the article.
    if (c == 'A' && next == ' ' && i + 2 < text.size() &&
        std::islower(static_cast<unsigned char>(text[i + 2]))) {
      continue;
    }
    choices.insert(letter_index(c));
  }

  static const std::regex number(R"((\d*\.\d+|\d+))");
  std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), number); it != std::sregex_iterator(); ++it) {
    double v = std::stod(it->str());
    for (int k = 0; k < 5; ++k) {
      if (std::abs(v - kEntailmentOptions[k]) < 1e-9) choices.insert(k);
    }
  }

  if (choices.size() != 1) {
    throw AmbiguousEntailment("cannot read one entailment option from \"" + std::string(trim(text)) + "\"");
  }
  return kEntailmentOptions[*choices.begin()];
}

double parse_probability(std::string_view text) {
  static const std::regex number(R"((\d*\.\d+|\d+)\s*(%?))");
  std::string s(text);
  std::smatch m;
  if (!std::regex_search(s, m, number)) {
    throw UnparseableReply("no probability in \"" + std::string(trim(text)) + "\"");
  }
  double v = std::stod(m[1].str());
  if (m[2].length() > 0) v /= 100.0;
  if (!(v >= 0.0 && v <= 1.0)) {
    throw UnparseableReply("probability out of range in \"" + std::string(trim(text)) + "\"");
  }
  return v;
}

}  // namespace crn
