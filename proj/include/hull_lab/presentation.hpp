#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hull_lab/word.hpp"

namespace hull_lab {

/// A letter inside a rule pattern. Indexed letters carry either a variable
/// plus offset (`x[n+1]`) or a constant (`x[3]`).
struct PatternLetter {
  std::uint16_t symbol = 0;
  bool indexed = false;
  int variable = -1;  // -1: constant index
  std::int32_t offset = 0;
};

struct RuleSchema {
  std::vector<PatternLetter> lhs;
  std::vector<PatternLetter> rhs;
  std::vector<std::string> variables;
  int line = 0;

  bool length_reducing() const { return lhs.size() > rhs.size(); }
  bool length_preserving() const { return lhs.size() == rhs.size(); }
};

/// Variable assignment for one rule instantiation.
using Binding = std::vector<std::int32_t>;

class Presentation {
public:
  Alphabet alphabet;
  std::vector<RuleSchema> rules;
  std::string source;  // the text it was parsed from

  std::size_t max_lhs() const {
    std::size_t m = 0;
    for (const auto& r : rules) m = std::max(m, r.lhs.size());
    return m;
  }

  /// max over rules of max(|lhs|, |rhs|); at least 1.
  std::size_t max_rule_len() const {
    std::size_t m = 1;
    for (const auto& r : rules) m = std::max({m, r.lhs.size(), r.rhs.size()});
    return m;
  }

  bool all_length_reducing() const {
    return std::all_of(rules.begin(), rules.end(), [](const RuleSchema& r) { return r.length_reducing(); });
  }

  bool length_non_increasing() const {
    return std::all_of(rules.begin(), rules.end(),
                       [](const RuleSchema& r) { return r.lhs.size() >= r.rhs.size(); });
  }

  /// Largest |offset| difference a single rewrite can apply to an index.
  int max_index_shift() const {
    int m = 0;
    for (const auto& r : rules)
      for (const auto& a : r.lhs)
        for (const auto& b : r.rhs)
          if (a.variable >= 0 && a.variable == b.variable) m = std::max(m, std::abs(a.offset - b.offset));
    return m;
  }

  std::vector<std::uint16_t> indexed_symbols() const {
    std::vector<std::uint16_t> out;
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i].indexed) out.push_back(static_cast<std::uint16_t>(i));
    return out;
  }

  /// Tries to match `pattern` at `pos` of `w`; on success fills `binding`.
  static bool match(const std::vector<PatternLetter>& pattern, std::size_t nvars, const Word& w,
                    std::size_t pos, Binding& binding) {
    if (pos + pattern.size() > w.size()) return false;
    binding.assign(nvars, 0);
    std::vector<bool> bound(nvars, false);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const PatternLetter& p = pattern[i];
      const Letter& l = w[pos + i];
      if (p.symbol != l.symbol) return false;
      if (!p.indexed) continue;
      if (p.variable < 0) {
        if (l.index != p.offset) return false;
        continue;
      }
      std::int32_t v = l.index - p.offset;
      if (bound[p.variable]) {
        if (binding[p.variable] != v) return false;
      } else {
        bound[p.variable] = true;
        binding[p.variable] = v;
      }
    }
    return true;
  }

  static Word instantiate(const std::vector<PatternLetter>& pattern, const Binding& binding) {
    Word w;
    w.reserve(pattern.size());
    for (const auto& p : pattern) {
      std::int32_t idx = 0;
      if (p.indexed) idx = p.variable < 0 ? p.offset : binding[p.variable] + p.offset;
      w.push_back(Letter{p.symbol, idx});
    }
    return w;
  }

  std::string format_pattern(const RuleSchema& r, const std::vector<PatternLetter>& pat) const {
    std::string out;
    for (std::size_t i = 0; i < pat.size(); ++i) {
      if (i) out += ' ';
      const auto& p = pat[i];
      out += alphabet[p.symbol].name;
      if (!p.indexed) continue;
      out += '[';
      if (p.variable < 0) {
        out += std::to_string(p.offset);
      } else {
        out += r.variables[p.variable];
        if (p.offset > 0) out += "+" + std::to_string(p.offset);
        if (p.offset < 0) out += std::to_string(p.offset);
      }
      out += ']';
    }
    return out.empty() ? "e" : out;
  }

  std::string format_rule(const RuleSchema& r) const {
    return format_pattern(r, r.lhs) + " -> " + format_pattern(r, r.rhs);
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool is_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

struct Token {
  std::string text;
  int column;
};

inline std::vector<Token> split_tokens(std::string_view line, int base_column) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    int depth = 0;
    while (i < line.size() && (depth > 0 || !std::isspace(static_cast<unsigned char>(line[i])))) {
      if (line[i] == '[') ++depth;
      if (line[i] == ']') --depth;
      ++i;
    }
    toks.push_back(Token{std::string(line.substr(start, i - start)), base_column + static_cast<int>(start)});
  }
  return toks;
}

// Parses `x[n+1]`, `x[n]`, `x[-2]`, `a` into a pattern letter. Registers
// variables in `vars` when `allow_new_vars`.
inline PatternLetter parse_pattern_letter(const Alphabet& alpha, const Token& tok, std::vector<std::string>& vars,
                                          bool allow_new_vars, int line) {
  const std::string& t = tok.text;
  auto br = t.find('[');
  std::string name = br == std::string::npos ? t : t.substr(0, br);
  int s = alpha.find(name);
  if (s < 0) throw ParseError("undeclared symbol '" + name + "'", line, tok.column);
  PatternLetter p;
  p.symbol = static_cast<std::uint16_t>(s);
  p.indexed = alpha[s].indexed;
  if (br == std::string::npos) {
    if (p.indexed) throw ParseError("indexed family '" + name + "' needs an index", line, tok.column);
    return p;
  }
  if (!p.indexed) throw ParseError("plain symbol '" + name + "' takes no index", line, tok.column);
  if (t.back() != ']') throw ParseError("malformed letter '" + t + "'", line, tok.column);
  std::string inner = trim(std::string_view(t).substr(br + 1, t.size() - br - 2));
  if (inner.empty()) throw ParseError("empty index", line, tok.column);
  std::size_t k = 0;
  if (std::isalpha(static_cast<unsigned char>(inner[0])) || inner[0] == '_') {
    while (k < inner.size() && (std::isalnum(static_cast<unsigned char>(inner[k])) || inner[k] == '_')) ++k;
    std::string var = inner.substr(0, k);
    auto it = std::find(vars.begin(), vars.end(), var);
    if (it == vars.end()) {
      if (!allow_new_vars)
        throw ParseError("index variable '" + var + "' is not bound by the left-hand side", line, tok.column);
      vars.push_back(var);
      it = vars.end() - 1;
    }
    p.variable = static_cast<int>(it - vars.begin());
    std::string rest = trim(std::string_view(inner).substr(k));
    if (!rest.empty()) {
      if (rest[0] != '+' && rest[0] != '-') throw ParseError("bad index expression '" + inner + "'", line, tok.column);
      std::string num = trim(std::string_view(rest).substr(1));
      char* end = nullptr;
      long v = std::strtol(num.c_str(), &end, 10);
      if (num.empty() || *end) throw ParseError("bad index offset '" + inner + "'", line, tok.column);
      p.offset = static_cast<std::int32_t>(rest[0] == '-' ? -v : v);
    }
  } else {
    char* end = nullptr;
    long v = std::strtol(inner.c_str(), &end, 10);
    if (*end) throw ParseError("bad index expression '" + inner + "'", line, tok.column);
    p.offset = static_cast<std::int32_t>(v);
  }
  return p;
}

}  // namespace detail

/// Reads a presentation file:
///
///     letters: a, b, x[n], y[n]
///     rules:
///       a b x[n] -> b x[n]
///       a b y[n] -> b y[n+1]
///
/// `#` starts a comment. The right-hand side may be `e` for the empty word.
inline Presentation parse_presentation(std::string_view text) {
  Presentation p;
  p.source = std::string(text);
  std::vector<SymbolDecl> decls;
  bool have_letters = false;
  bool in_rules = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string line = detail::trim(raw);
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    int col0 = static_cast<int>(raw.find_first_not_of(" \t")) + 1;

    if (line.rfind("letters:", 0) == 0) {
      if (have_letters) throw ParseError("duplicate letters section", line_no, col0);
      have_letters = true;
      in_rules = false;
      std::string rest = line.substr(8);
      std::size_t start = 0;
      while (start <= rest.size()) {
        std::size_t comma = rest.find(',', start);
        if (comma == std::string::npos) comma = rest.size();
        std::string item = detail::trim(std::string_view(rest).substr(start, comma - start));
        int col = col0 + 8 + static_cast<int>(start);
        start = comma + 1;
        if (item.empty()) {
          if (comma == rest.size()) break;
          throw ParseError("empty letter declaration", line_no, col);
        }
        SymbolDecl d;
        auto br = item.find('[');
        if (br == std::string::npos) {
          d.name = item;
        } else {
          if (item.back() != ']') throw ParseError("malformed family declaration '" + item + "'", line_no, col);
          d.name = detail::trim(std::string_view(item).substr(0, br));
          std::string var = detail::trim(std::string_view(item).substr(br + 1, item.size() - br - 2));
          if (!detail::is_ident(var)) throw ParseError("family index must be a variable name", line_no, col);
          d.indexed = true;
        }
        if (!detail::is_ident(d.name)) throw ParseError("bad symbol name '" + d.name + "'", line_no, col);
        for (const auto& other : decls)
          if (other.name == d.name) throw ParseError("duplicate symbol '" + d.name + "'", line_no, col);
        decls.push_back(d);
        if (comma == rest.size()) break;
      }
      p.alphabet = Alphabet(decls);
      continue;
    }
    if (line == "rules:") {
      if (!have_letters) throw ParseError("rules before letters", line_no, col0);
      in_rules = true;
      continue;
    }
    if (!in_rules) throw ParseError("expected 'letters:' or 'rules:'", line_no, col0);

    auto arrow = line.find("->");
    if (arrow == std::string::npos) throw ParseError("rule needs '->'", line_no, col0);
    std::string lhs_text = line.substr(0, arrow);
    std::string rhs_text = line.substr(arrow + 2);
    RuleSchema rule;
    rule.line = line_no;
    for (const auto& tok : detail::split_tokens(lhs_text, col0)) {
      if (tok.text == "e" && p.alphabet.find("e") < 0) continue;
      rule.lhs.push_back(detail::parse_pattern_letter(p.alphabet, tok, rule.variables, true, line_no));
    }
    if (rule.lhs.empty()) throw ParseError("empty left-hand side", line_no, col0);
    int rhs_col = col0 + static_cast<int>(arrow) + 2;
    for (const auto& tok : detail::split_tokens(rhs_text, rhs_col)) {
      if (tok.text == "e" && p.alphabet.find("e") < 0) continue;
      rule.rhs.push_back(detail::parse_pattern_letter(p.alphabet, tok, rule.variables, false, line_no));
    }
    p.rules.push_back(std::move(rule));
    if (nl == text.size()) break;
  }
  if (!have_letters) throw ParseError("missing 'letters:' section", 1, 1);
  return p;
}

/// The presentations shipped with the tool.
namespace builtin {

inline constexpr std::string_view kS =
    "# S = < a, b, x_n, y_n : a b x_n = b x_n, a b y_n = b y_{n+1} >\n"
    "letters: a, b, x[n], y[n]\n"
    "rules:\n"
    "  a b x[n] -> b x[n]\n"
    "  a b y[n] -> b y[n+1]\n";

inline constexpr std::string_view kT =
    "# T = S with an extra generator c acting on the other family\n"
    "letters: a, b, c, x[n], y[n]\n"
    "rules:\n"
    "  a b x[n] -> b x[n]\n"
    "  a b y[n] -> b y[n+1]\n"
    "  c b x[n] -> b x[n+1]\n"
    "  c b y[n] -> b y[n]\n";

inline constexpr std::string_view kFree2 =
    "# free monoid on two generators\n"
    "letters: a, b\n"
    "rules:\n";

inline constexpr std::string_view kAbac =
    "# < a, b, c : a b = a c >, not left cancellative\n"
    "letters: a, b, c\n"
    "rules:\n"
    "  a c -> a b\n";

inline std::optional<std::string_view> lookup(std::string_view name) {
  if (name == "S") return kS;
  if (name == "T") return kT;
  if (name == "free2") return kFree2;
  if (name == "abac") return kAbac;
  return std::nullopt;
}

inline Presentation S() { return parse_presentation(kS); }
inline Presentation T() { return parse_presentation(kT); }
inline Presentation free2() { return parse_presentation(kFree2); }
inline Presentation abac() { return parse_presentation(kAbac); }

}  // namespace builtin

}  // namespace hull_lab
