#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hull_lab {

/// Error raised while reading presentations, words, zigzags or expressions.
/// Line and column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  static std::string format(const std::string& what, int line, int column) {
    if (line == 0) return what;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }
  int line_;
  int column_;
};

/// Raised when a step or search budget is exhausted.
class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation is called outside its precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Letter {
  std::uint16_t symbol = 0;
  std::int32_t index = 0;  // meaningful only for indexed families

  friend bool operator==(const Letter&, const Letter&) = default;
};

// Indices are ordered by magnitude, negative first: 0, -1, 1, -2, 2, ...
inline std::int64_t index_rank(std::int32_t n) {
  return n >= 0 ? 2 * std::int64_t{n} : -2 * std::int64_t{n} - 1;
}

inline bool operator<(const Letter& a, const Letter& b) {
  if (a.symbol != b.symbol) return a.symbol < b.symbol;
  return index_rank(a.index) < index_rank(b.index);
}

using Word = std::vector<Letter>;

/// Shortlex order on words; the canonical enumeration order everywhere.
inline bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    return a[i] < b[i];
  }
  return false;
}

struct ShortlexLess {
  bool operator()(const Word& a, const Word& b) const { return shortlex_less(a, b); }
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (const Letter& l : w) {
      h ^= l.symbol;
      h *= 1099511628211ull;
      h ^= static_cast<std::uint32_t>(l.index);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline bool is_prefix(const Word& prefix, const Word& w) {
  if (prefix.size() > w.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (!(prefix[i] == w[i])) return false;
  return true;
}

inline Word concat(const Word& a, const Word& b) {
  Word r;
  r.reserve(a.size() + b.size());
  r.insert(r.end(), a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

struct SymbolDecl {
  std::string name;
  bool indexed = false;
};

/// The declared alphabet: plain symbols and integer-indexed families.
class Alphabet {
public:
  Alphabet() = default;
  explicit Alphabet(std::vector<SymbolDecl> symbols) : symbols_(std::move(symbols)) {}

  const std::vector<SymbolDecl>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  const SymbolDecl& operator[](std::size_t i) const { return symbols_.at(i); }

  int find(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].name == name) return static_cast<int>(i);
    return -1;
  }

  bool is_indexed(const Letter& l) const { return symbols_.at(l.symbol).indexed; }

  Letter plain(std::string_view name) const {
    int s = find(name);
    if (s < 0 || symbols_[s].indexed)
      throw ParseError("not a plain letter: " + std::string(name));
    return Letter{static_cast<std::uint16_t>(s), 0};
  }

  Letter indexed(std::string_view name, std::int32_t n) const {
    int s = find(name);
    if (s < 0 || !symbols_[s].indexed)
      throw ParseError("not an indexed family: " + std::string(name));
    return Letter{static_cast<std::uint16_t>(s), n};
  }

  std::string format(const Letter& l) const {
    const SymbolDecl& d = symbols_.at(l.symbol);
    if (!d.indexed) return d.name;
    return d.name + "[" + std::to_string(l.index) + "]";
  }

  /// Space-separated letters; the empty word prints as "e".
  std::string format(const Word& w) const {
    if (w.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += format(w[i]);
    }
    return out;
  }

  /// Parses one letter token such as `a` or `x[-3]`.
  Letter parse_letter(std::string_view tok) const {
    auto br = tok.find('[');
    if (br == std::string_view::npos) {
      int s = find(tok);
      if (s < 0) throw ParseError("undeclared symbol '" + std::string(tok) + "'");
      if (symbols_[s].indexed)
        throw ParseError("indexed family '" + std::string(tok) + "' needs an index");
      return Letter{static_cast<std::uint16_t>(s), 0};
    }
    if (tok.back() != ']') throw ParseError("malformed letter '" + std::string(tok) + "'");
    std::string_view name = tok.substr(0, br);
    std::string idx(tok.substr(br + 1, tok.size() - br - 2));
    int s = find(name);
    if (s < 0) throw ParseError("undeclared symbol '" + std::string(name) + "'");
    if (!symbols_[s].indexed)
      throw ParseError("plain symbol '" + std::string(name) + "' takes no index");
    char* end = nullptr;
    long v = std::strtol(idx.c_str(), &end, 10);
    if (idx.empty() || *end != '\0')
      throw ParseError("bad index in '" + std::string(tok) + "'");
    return Letter{static_cast<std::uint16_t>(s), static_cast<std::int32_t>(v)};
  }

  /// Whitespace-separated letters. "" and "e" denote the empty word unless
  /// `e` is itself declared.
  Word parse_word(std::string_view text) const {
    Word w;
    std::istringstream in{std::string(text)};
    std::string tok;
    std::vector<std::string> toks;
    while (in >> tok) toks.push_back(tok);
    if (toks.size() == 1 && toks[0] == "e" && find("e") < 0) return w;
    for (const auto& t : toks) w.push_back(parse_letter(t));
    return w;
  }

private:
  std::vector<SymbolDecl> symbols_;
};

/// Closed integer interval bounding family indices.
struct Window {
  int lo = 0;
  int hi = 0;

  bool contains(int n) const { return lo <= n && n <= hi; }
  Window widened(int by) const { return Window{lo - by, hi + by}; }
  std::string str() const { return std::to_string(lo) + ".." + std::to_string(hi); }

  static Window parse(std::string_view text) {
    auto dots = text.find("..");
    if (dots == std::string_view::npos) throw ParseError("window must look like a..b");
    std::string a(text.substr(0, dots)), b(text.substr(dots + 2));
    char* e1 = nullptr;
    char* e2 = nullptr;
    long lo = std::strtol(a.c_str(), &e1, 10);
    long hi = std::strtol(b.c_str(), &e2, 10);
    if (a.empty() || b.empty() || *e1 || *e2 || lo > hi)
      throw ParseError("bad window '" + std::string(text) + "'");
    return Window{static_cast<int>(lo), static_cast<int>(hi)};
  }

  friend bool operator==(const Window&, const Window&) = default;
};

inline bool word_in_window(const Alphabet& alpha, const Word& w, const Window& win) {
  for (const Letter& l : w)
    if (alpha.is_indexed(l) && !win.contains(l.index)) return false;
  return true;
}

/// FNV-1a, used for report hashes that must be stable across platforms.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace hull_lab
