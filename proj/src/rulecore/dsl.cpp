#include "crn/rulecore/dsl.hpp"

#include "crn/errors.hpp"

#include <cctype>
#include <optional>

namespace crn {
namespace {

enum class Tok { word, quoted, lparen, rparen, kw_and, kw_or, kw_not, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
public:
  Lexer(std::string_view src, std::size_t offset, int line, int column)
      : src_(src), pos_(offset), line_(line), col_(column) {}

  Token next() {
    skip_space();
    int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::end, "", line, col};
    char c = src_[pos_];
    if (c == '(') { advance(); return {Tok::lparen, "(", line, col}; }
    if (c == ')') { advance(); return {Tok::rparen, ")", line, col}; }
    if (c == '"') return quoted(line, col);
    std::string word;
    while (pos_ < src_.size()) {
      char d = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '"') break;
      word.push_back(d);
      advance();
    }
    if (word == "AND") return {Tok::kw_and, word, line, col};
    if (word == "OR") return {Tok::kw_or, word, line, col};
    if (word == "NOT") return {Tok::kw_not, word, line, col};
    return {Tok::word, word, line, col};
  }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  Token quoted(int line, int col) {
    advance();
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) throw ParseError("unterminated quoted symbol", line, col);
      char c = src_[pos_];
      if (c == '"') {
        advance();
        return {Tok::quoted, out, line, col};
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) throw ParseError("dangling escape", line_, col_);
        c = src_[pos_];
      }
      out.push_back(c);
      advance();
    }
  }

  std::string_view src_;
  std::size_t pos_;
  int line_;
  int col_;
};

class Parser {
public:
  Parser(std::string_view src, std::size_t offset, int line, int column)
      : lex_(src, offset, line, column) {
    cur_ = lex_.next();
  }

  std::vector<Group> body() {
    std::vector<Group> groups;
    groups.push_back(group());
    while (cur_.kind == Tok::kw_and) {
      take();
      groups.push_back(group());
    }
    if (cur_.kind != Tok::end) fail("expected AND or end of rule");
    return groups;
  }

private:
  Token take() {
    Token t = std::move(cur_);
    cur_ = lex_.next();
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::string found = cur_.kind == Tok::end ? "end of input" : "\"" + cur_.text + "\"";
    throw ParseError(what + ", found " + found, cur_.line, cur_.column);
  }

  Group group() {
    if (cur_.kind != Tok::lparen) return {literal()};
    take();
    Group g;
    g.push_back(literal());
    if (cur_.kind != Tok::kw_or) fail("expected OR inside parenthesized group");
    take();
    g.push_back(literal());
    if (cur_.kind != Tok::rparen) fail("expected \")\"");
    take();
    return g;
  }

  Literal literal() {
    bool negated = false;
    if (cur_.kind == Tok::kw_not) {
      take();
      negated = true;
    }
    return Literal{symbol(), negated};
  }

  SymbolAtom symbol() {
    int line = cur_.line, col = cur_.column;
    std::string text;
    if (cur_.kind == Tok::quoted) {
      text = take().text;
    } else {
      if (cur_.kind != Tok::word) fail("expected symbol");
      while (cur_.kind == Tok::word) {
        if (!text.empty()) text.push_back(' ');
        text += take().text;
      }
    }
    try {
      return SymbolAtom(text);
    } catch (const InvalidSymbol& e) {
      throw ParseError(e.what(), line, col);
    }
  }

  Lexer lex_;
  Token cur_;
};

bool needs_quotes(const std::string& s) {
  for (char c : s) {
    if (c == '(' || c == ')' || c == '"' || c == '\\') return true;
  }
  // A bare word that spells a keyword would be lexed as one.
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(' ', start);
    if (end == std::string::npos) end = s.size();
    auto word = std::string_view(s).substr(start, end - start);
    if (word == "AND" || word == "OR" || word == "NOT") return true;
    start = end + 1;
  }
  return false;
}

std::string print_symbol(const SymbolAtom& sym) {
  const auto& s = sym.canonical();
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

Rule parse_at(std::string_view text, int first_line, int max_groups) {
  auto sep = text.find(":-");
  int line = first_line, col = 1;
  if (sep == std::string_view::npos) throw ParseError("expected \":-\" after label", line, col);
  std::size_t b = 0;
  while (b < sep && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  std::size_t e = sep;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  if (e == b) throw ParseError("missing class label", line, col);
  for (std::size_t i = 0; i < sep + 2; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  Rule rule;
  rule.label = std::string(text.substr(b, e - b));
  Parser parser(text, sep + 2, line, col);
  rule.groups = parser.body();
  validate_rule(rule, max_groups);
  return rule;
}

}  // namespace

Rule parse_rule(std::string_view text, int max_groups) { return parse_at(text, 1, max_groups); }

std::vector<Rule> parse_rules(std::string_view text, int max_groups) {
  std::vector<Rule> out;
  int line = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto row = text.substr(start, end - start);
    auto first = row.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && row[first] != '#') {
      out.push_back(parse_at(row, line, max_groups));
    }
    ++line;
    start = end + 1;
  }
  return out;
}

std::string print_literal(const Literal& lit) {
  return (lit.negated ? "NOT " : "") + print_symbol(lit.symbol);
}

std::string print_body(const Rule& rule) {
  std::string out;
  for (std::size_t i = 0; i < rule.groups.size(); ++i) {
    if (i) out += " AND ";
    const auto& g = rule.groups[i];
    if (g.size() == 1) {
      out += print_literal(g.front());
      continue;
    }
    out += "(";
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (j) out += " OR ";
      out += print_literal(g[j]);
    }
    out += ")";
  }
  return out;
}

std::string print_rule(const Rule& rule) { return rule.label + " :- " + print_body(rule); }

}  // namespace crn
