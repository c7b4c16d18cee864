#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_set>

#include "hull_lab/cancellativity.hpp"

namespace hull_lab {

// ---------------------------------------------------------------------------
// Symbolic descriptions

enum class IdealKind { empty, principal, family, preimage, translate, intersect };

struct IdealNode;
using Ideal = std::shared_ptr<const IdealNode>;

/// Principal(s) = sS. Family(s) = union of s l S over indexed letters l.
/// Preimage, Translate and Intersect are the opaque generator trace.
struct IdealNode {
  IdealKind kind = IdealKind::empty;
  Word word;  // s for principal/family/translate; the letter for preimage
  Ideal left;
  Ideal right;
};

enum class Shape { empty, principal, family, opaque };

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::empty: return "Empty";
    case Shape::principal: return "Principal";
    case Shape::family: return "Family";
    case Shape::opaque: return "Opaque";
  }
  return "?";
}

namespace ideal {

inline Ideal make(IdealKind k, Word w = {}, Ideal l = nullptr, Ideal r = nullptr) {
  auto n = std::make_shared<IdealNode>();
  n->kind = k;
  n->word = std::move(w);
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

inline Ideal empty() { return make(IdealKind::empty); }
inline Ideal principal(Word s) { return make(IdealKind::principal, std::move(s)); }
inline Ideal whole() { return principal({}); }
inline Ideal family(Word s) { return make(IdealKind::family, std::move(s)); }
inline Ideal preimage(Letter x, Ideal I) { return make(IdealKind::preimage, Word{x}, std::move(I)); }
inline Ideal translate(Word s, Ideal I) { return make(IdealKind::translate, std::move(s), std::move(I)); }
inline Ideal intersect(Ideal a, Ideal b) { return make(IdealKind::intersect, {}, std::move(a), std::move(b)); }

}  // namespace ideal

inline Shape shape_of(const Ideal& I) {
  switch (I->kind) {
    case IdealKind::empty: return Shape::empty;
    case IdealKind::principal: return Shape::principal;
    case IdealKind::family: return Shape::family;
    default: return Shape::opaque;
  }
}

inline std::string describe(const Alphabet& a, const Ideal& I) {
  switch (I->kind) {
    case IdealKind::empty: return "Empty";
    case IdealKind::principal: return I->word.empty() ? "S" : "Principal(" + a.format(I->word) + ")";
    case IdealKind::family: return "Family(" + a.format(I->word) + ")";
    case IdealKind::preimage: return "Preimage(" + a.format(I->word) + ", " + describe(a, I->left) + ")";
    case IdealKind::translate: return "Translate(" + a.format(I->word) + ", " + describe(a, I->left) + ")";
    case IdealKind::intersect:
      return "Intersect(" + describe(a, I->left) + ", " + describe(a, I->right) + ")";
  }
  return "?";
}

/// Parses the description syntax produced by `describe`.
inline Ideal parse_ideal(const Presentation& p, std::string_view text) {
  struct Parser {
    const Presentation& p;
    std::string_view s;
    std::size_t i = 0;

    void ws() {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    [[noreturn]] void fail(const std::string& what) {
      throw ParseError(what + " in ideal '" + std::string(s) + "'", 1, static_cast<int>(i) + 1);
    }
    std::string ident() {
      ws();
      std::size_t b = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      return std::string(s.substr(b, i - b));
    }
    void expect(char c) {
      ws();
      if (i >= s.size() || s[i] != c) fail(std::string("expected '") + c + "'");
      ++i;
    }
    // A word runs to the next top-level ',' or ')'.
    Word word() {
      ws();
      std::size_t b = i;
      int depth = 0;
      while (i < s.size()) {
        char c = s[i];
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (depth == 0 && (c == ',' || c == ')')) break;
        ++i;
      }
      try {
        return p.alphabet.parse_word(s.substr(b, i - b));
      } catch (const ParseError& e) {
        fail(e.what());
      }
    }
    Ideal ideal() {
      std::string name = ident();
      if (name == "Empty") return ideal::empty();
      if (name == "S" || name == "T" || name == "whole") return ideal::whole();
      if (name == "Principal" || name == "Family") {
        expect('(');
        Word w = normalize(p, word());
        expect(')');
        return name == "Principal" ? ideal::principal(std::move(w)) : ideal::family(std::move(w));
      }
      if (name == "Preimage" || name == "Translate") {
        expect('(');
        Word w = normalize(p, word());
        expect(',');
        Ideal inner = ideal();
        expect(')');
        if (name == "Translate") return ideal::translate(std::move(w), std::move(inner));
        if (w.size() != 1) fail("Preimage takes a single letter");
        return ideal::preimage(w[0], std::move(inner));
      }
      if (name == "Intersect") {
        expect('(');
        Ideal a = ideal();
        expect(',');
        Ideal b = ideal();
        expect(')');
        return ideal::intersect(std::move(a), std::move(b));
      }
      fail("unknown ideal form '" + name + "'");
    }
  };
  Parser ps{p, text};
  Ideal out = ps.ideal();
  ps.ws();
  if (ps.i != text.size()) ps.fail("trailing input");
  return out;
}

/// X minus the union of the removed ideals.
struct GeneralizedIdeal {
  Ideal base;
  std::vector<Ideal> removed;
};

inline std::string describe(const Alphabet& a, const GeneralizedIdeal& g) {
  std::string out = describe(a, g.base);
  if (g.removed.empty()) return out;
  out += " minus {";
  for (std::size_t i = 0; i < g.removed.size(); ++i) out += (i ? ", " : "") + describe(a, g.removed[i]);
  return out + "}";
}

// ---------------------------------------------------------------------------
// Ball traces

/// The trace of a right ideal on a ball, stored as its antichain of
/// prefix-minimal elements. Right-closedness on the ball makes this lossless:
/// a ball word lies in the trace iff one of its prefixes is minimal.
class Trace {
public:
  Trace() = default;
  explicit Trace(std::vector<Word> words) {
    std::sort(words.begin(), words.end(), ShortlexLess{});
    words.erase(std::unique(words.begin(), words.end()), words.end());
    for (auto& w : words) {
      if (contains(w)) continue;
      index_.insert(w);
      minimal_.push_back(std::move(w));
    }
  }

  const std::vector<Word>& minimal() const { return minimal_; }
  bool empty() const { return minimal_.empty(); }

  bool contains(const Word& w) const {
    if (index_.empty()) return false;
    Word pre;
    pre.reserve(w.size());
    if (index_.count(pre)) return true;
    for (const Letter& l : w) {
      pre.push_back(l);
      if (index_.count(pre)) return true;
    }
    return false;
  }

  bool subset_of(const Trace& o) const {
    return std::all_of(minimal_.begin(), minimal_.end(), [&](const Word& m) { return o.contains(m); });
  }

  friend bool operator==(const Trace& a, const Trace& b) { return a.minimal_ == b.minimal_; }
  friend bool operator<(const Trace& a, const Trace& b) { return a.minimal_ < b.minimal_; }

  /// Same minimal elements up to the given length.
  Trace restricted(std::size_t radius) const {
    std::vector<Word> keep;
    for (const auto& m : minimal_)
      if (m.size() <= radius) keep.push_back(m);
    return Trace(std::move(keep));
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& m : minimal_) {
      h = (h ^ WordHash{}(m)) * 1099511628211ull;
      h = (h ^ 0xff) * 1099511628211ull;
    }
    return h;
  }

private:
  std::vector<Word> minimal_;
  std::unordered_set<Word, WordHash> index_;
};

/// Intersection of two up-closed tries.
inline Trace meet(const Trace& a, const Trace& b) {
  std::vector<Word> out;
  for (const auto& x : a.minimal())
    for (const auto& y : b.minimal()) {
      if (is_prefix(x, y)) out.push_back(y);
      else if (is_prefix(y, x)) out.push_back(x);
    }
  return Trace(std::move(out));
}

inline Trace join(const Trace& a, const Trace& b) {
  std::vector<Word> all = a.minimal();
  all.insert(all.end(), b.minimal().begin(), b.minimal().end());
  return Trace(std::move(all));
}

/// Number of ball words in the trace.
inline std::size_t trace_size(const Ball& ball, const Trace& t) {
  std::size_t n = 0;
  for (const auto& m : t.minimal())
    ball.walk_from(m, [&](const Word&) {
      ++n;
      return true;
    });
  return n;
}

// ---------------------------------------------------------------------------
// Exact membership and extensional traces

/// Bound on the length of prefix-minimal elements of an ideal; depth limit
/// of the trace search.
inline std::size_t horizon(const Presentation& p, const Ideal& I) {
  // A redex straddling s·u takes at most L - 1 letters of u, and shortens
  // the word when every rule does.
  std::size_t L = p.max_rule_len();
  std::size_t reach = p.all_length_reducing() && L >= 2 ? L - 2 : L - 1;
  switch (I->kind) {
    case IdealKind::empty: return 0;
    case IdealKind::principal: return I->word.size() + reach;
    case IdealKind::family: return I->word.size() + reach + 1;
    case IdealKind::preimage: return horizon(p, I->left);
    case IdealKind::translate: return I->word.size() + horizon(p, I->left);
    case IdealKind::intersect: return std::max(horizon(p, I->left), horizon(p, I->right));
  }
  return 0;
}

/// Membership, operations and traces of ideals on one ball.
class IdealEngine {
public:
  IdealEngine(const Presentation& p, Ball ball) : p_(&p), ball_(std::move(ball)), div_(p) {}

  const Presentation& presentation() const { return *p_; }
  const Ball& ball() const { return ball_; }
  const Divider& divider() const { return div_; }
  std::string describe(const Ideal& I) const { return hull_lab::describe(p_->alphabet, I); }
  std::string describe(const GeneralizedIdeal& I) const { return hull_lab::describe(p_->alphabet, I); }

  /// Exact membership of a normal form, through the description.
  bool contains(const Ideal& I, const Word& z) const {
    switch (I->kind) {
      case IdealKind::empty: return false;
      case IdealKind::principal: return div_.cofactor_normal(I->word, z).has_value();
      case IdealKind::family: {
        auto u = div_.cofactor_normal(I->word, z);
        if (!u) return false;
        for (const Letter& l : div_.leading_letters(*u))
          if (p_->alphabet.is_indexed(l)) return true;
        return false;
      }
      case IdealKind::preimage: return contains(I->left, normalize(*p_, concat(I->word, z)));
      case IdealKind::translate: {
        auto u = div_.cofactor_normal(I->word, z);
        return u && contains(I->left, *u);
      }
      case IdealKind::intersect: return contains(I->left, z) && contains(I->right, z);
    }
    return false;
  }

  bool contains(const GeneralizedIdeal& g, const Word& z) const {
    if (!contains(g.base, z)) return false;
    for (const auto& r : g.removed)
      if (contains(r, z)) return false;
    return true;
  }

  template <class I>
  Verdict membership(const I& ideal, const Word& w) const {
    try {
      Word z = normalize(*p_, w);
      bool in = contains(ideal, z);
      return Verdict::make(in ? Status::holds : Status::fails, {z});
    } catch (const BudgetExceeded& e) {
      return Verdict::make(Status::unknown, {}, e.what());
    }
  }

  /// Trace on the ball by depth-first search, pruned at the horizon.
  Trace search_trace(const Ideal& I, std::size_t depth_limit) const {
    std::vector<Word> found;
    ball_.walk([&](const Word& w) {
      if (contains(I, w)) {
        found.push_back(w);
        return false;
      }
      return w.size() < depth_limit;
    });
    return Trace(std::move(found));
  }

  /// Trace on the ball, memoized by description.
  const Trace& trace(const Ideal& I) const {
    std::string key = describe(I);
    auto it = traces_.find(key);
    if (it != traces_.end()) return it->second;
    Trace t;
    if (I->kind == IdealKind::intersect) t = meet(trace(I->left), trace(I->right));
    else if (I->kind != IdealKind::empty) t = search_trace(I, horizon(*p_, I));
    return traces_.emplace(std::move(key), std::move(t)).first->second;
  }

  /// True when every ball element of the generalized ideal satisfies `pred`,
  /// checked on prefix-minimal elements of the base outside the removed
  /// ideals. Returns the first offending element.
  std::optional<Word> first_outside(const GeneralizedIdeal& g, const std::function<bool(const Word&)>& pred) const {
    for (const auto& m : trace(g.base).minimal()) {
      if (in_removed(g, m)) continue;
      if (!pred(m)) return m;
    }
    return std::nullopt;
  }

  bool in_removed(const GeneralizedIdeal& g, const Word& w) const {
    for (const auto& r : g.removed)
      if (trace(r).contains(w)) return true;
    return false;
  }

  /// X minus the removed ideals has a ball element.
  bool nonempty(const GeneralizedIdeal& g) const {
    for (const auto& m : trace(g.base).minimal())
      if (!in_removed(g, m)) return true;
    return false;
  }

  // -- operations -----------------------------------------------------------

  Ideal translate(const Word& t, const Ideal& I) const {
    Word tn = normalize(*p_, t);
    if (tn.empty()) return I;
    switch (I->kind) {
      case IdealKind::empty: return I;
      case IdealKind::principal: return ideal::principal(normalize(*p_, concat(tn, I->word)));
      case IdealKind::family: return ideal::family(normalize(*p_, concat(tn, I->word)));
      default: return ideal::translate(tn, I);
    }
  }

  Ideal preimage(Letter x, const Ideal& I) const {
    switch (I->kind) {
      case IdealKind::empty: return I;
      case IdealKind::principal:
      case IdealKind::family:
        if (auto u = div_.divide(x, I->word))
          return I->kind == IdealKind::principal ? ideal::principal(*u) : ideal::family(*u);
        [[fallthrough]];
      default: return ideal::preimage(x, I);
    }
  }

  Ideal intersect(const Ideal& a, const Ideal& b) const {
    if (a->kind == IdealKind::empty) return a;
    if (b->kind == IdealKind::empty) return b;
    if (a->kind == IdealKind::principal && a->word.empty()) return b;
    if (b->kind == IdealKind::principal && b->word.empty()) return a;
    return ideal::intersect(a, b);
  }

  /// Closed forms whose trace matches `t` on this ball: Empty, Principal(m)
  /// and Family(m') for prefix-minimal m = m' l with l indexed.
  std::optional<Ideal> match_closed_form(const Trace& t, std::size_t max_candidates = 64) const {
    if (t.empty()) return ideal::empty();
    std::size_t tried = 0;
    for (const auto& m : t.minimal()) {
      if (++tried > max_candidates) break;
      Ideal cand = ideal::principal(m);
      if (trace(cand) == t) return cand;
      if (!m.empty() && p_->alphabet.is_indexed(m.back())) {
        cand = ideal::family(Word(m.begin(), m.end() - 1));
        if (trace(cand) == t) return cand;
      }
    }
    return std::nullopt;
  }

  /// Upgrades an opaque ideal to a closed form when the traces agree on this
  /// ball and, recomputed independently, on the ball of radius - 2.
  Ideal classify(const Ideal& I) const {
    if (shape_of(I) != Shape::opaque) return I;
    auto cand = match_closed_form(trace(I));
    if (!cand) return I;
    if (ball_.radius() >= 2) {
      const IdealEngine& low = lower();
      if (!(low.search_trace(I, horizon(*p_, I)) == low.trace(*cand))) return I;
    }
    return *cand;
  }

  const IdealEngine& lower() const {
    if (!lower_) lower_ = std::make_unique<IdealEngine>(*p_, ball_.with_radius(ball_.radius() - 2));
    return *lower_;
  }

private:
  const Presentation* p_;
  Ball ball_;
  Divider div_;
  mutable std::map<std::string, Trace> traces_;
  mutable std::unique_ptr<IdealEngine> lower_;
};

// ---------------------------------------------------------------------------
// Finite alignment

struct AlignmentEntry {
  Word s;
  Word t;
  std::vector<Word> generators;  // minimal generators of sS ∩ tS on the ball
};

/// Minimal right-ideal generators of an up-closed trace: prefix-minimal
/// elements not divisible by another prefix-minimal element.
inline std::vector<Word> minimal_generators(const IdealEngine& eng, const Trace& t) {
  std::vector<Word> out;
  const auto& ms = t.minimal();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < ms.size() && !redundant; ++j)
      if (i != j && eng.divider().cofactor(ms[j], ms[i])) redundant = true;
    if (!redundant) out.push_back(ms[i]);
  }
  return out;
}

inline AlignmentEntry alignment(const IdealEngine& eng, const Word& s, const Word& t) {
  Trace m = meet(eng.trace(ideal::principal(s)), eng.trace(ideal::principal(t)));
  return AlignmentEntry{s, t, minimal_generators(eng, m)};
}

/// Generator counts of sS ∩ tS for all pairs of distinct window letters.
inline std::vector<AlignmentEntry> finite_alignment_report(const IdealEngine& eng) {
  std::vector<AlignmentEntry> out;
  const auto& ls = eng.ball().letters();
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (std::size_t j = i + 1; j < ls.size(); ++j) out.push_back(alignment(eng, Word{ls[i]}, Word{ls[j]}));
  return out;
}

}  // namespace hull_lab
