#include "crn/rulecore/symbol.hpp"

#include "crn/errors.hpp"

#include <array>
#include <cctype>

namespace crn {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_trailing_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?': case '"': case '\'':
      return true;
    default:
      return false;
  }
}

std::string collapse_lower(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (char c : in) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string canonical_text(std::string_view raw) {
  static constexpr std::array<std::string_view, 3> kArticles{"a ", "an ", "the "};
  std::string s = collapse_lower(raw);
  // Each strip can expose another (e.g. "the a cat ."), so iterate to a fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    while (!s.empty() && (is_trailing_punct(s.back()) || s.back() == ' ')) {
      s.pop_back();
      changed = true;
    }
    for (auto article : kArticles) {
      if (s.size() > article.size() && s.compare(0, article.size(), article) == 0) {
        s.erase(0, article.size());
        changed = true;
      }
    }
    while (!s.empty() && s.front() == ' ') {
      s.erase(0, 1);
      changed = true;
    }
  }
  return s;
}

SymbolAtom::SymbolAtom(std::string_view raw) : raw_(raw), canonical_(canonical_text(raw)) {
  if (canonical_.empty()) {
    throw InvalidSymbol("symbol is empty after normalization: \"" + std::string(raw) + "\"");
  }
}

SymbolAtom canonicalize(std::string_view raw) { return SymbolAtom(raw); }

}  // namespace crn
