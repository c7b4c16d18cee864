#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hull_lab/ideals.hpp"

namespace hull_lab {

/// A letter of a zigzag: x (left multiplication) or x^-1 (left division).
struct SLetter {
  Letter letter;
  bool inverse = false;

  friend bool operator==(const SLetter&, const SLetter&) = default;
};

/// Composition order: the rightmost entry acts first.
using Zigzag = std::vector<SLetter>;

/// The idempotent restricting to {w : pre(w) is defined and lies in J}.
struct Deferred {
  Ideal ideal;
  Zigzag pre;
};

/// An element of the left inverse hull: a reduced zigzag `body` composed on
/// the right with commuting idempotents.
struct HullElement {
  Zigzag body;
  std::vector<Deferred> deferred;
  bool zero = false;
};

inline std::string format_zigzag(const Alphabet& a, const Zigzag& z) {
  if (z.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) out += ' ';
    out += a.format(z[i].letter);
    if (z[i].inverse) out += "^-1";
  }
  return out;
}

inline std::string format_deferred(const Alphabet& a, const Deferred& d) {
  std::string j = describe(a, d.ideal);
  if (d.pre.empty()) return "p[" + j + "]";
  return "p[(" + format_zigzag(a, d.pre) + ")^-1 " + j + "]";
}

inline std::string format_hull(const Alphabet& a, const HullElement& h) {
  if (h.zero) return "0";
  std::string out = format_zigzag(a, h.body);
  for (const auto& d : h.deferred) out += " " + format_deferred(a, d);
  return out;
}

inline Zigzag inverse_of(const Zigzag& z) {
  Zigzag out(z.rbegin(), z.rend());
  for (auto& s : out) s.inverse = !s.inverse;
  return out;
}

inline Zigzag positive(const Word& w) {
  Zigzag z;
  for (const Letter& l : w) z.push_back({l, false});
  return z;
}

/// Canonicalization, application, composition and domains of hull elements.
class HullCalculus {
public:
  explicit HullCalculus(const IdealEngine& eng) : eng_(&eng), p_(&eng.presentation()) {}

  const IdealEngine& engine() const { return *eng_; }

  // -- reduction ------------------------------------------------------------

  /// Reduces a zigzag without changing it as a partial map:
  ///  x^-1 x -> e; positive runs to normal form; inverse runs likewise;
  ///  u^-1 v with u dividing v -> cofactor.
  /// With `defer`, each x x^-1 is removed and recorded as an idempotent.
  Zigzag reduce(Zigzag z, std::vector<Deferred>* defer) const {
    bool changed = true;
    while (changed) {
      changed = false;
      // x^-1 x cancels; x x^-1 becomes an idempotent moved to the right.
      for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        if (!(z[i].letter == z[i + 1].letter) || z[i].inverse == z[i + 1].inverse) continue;
        if (z[i].inverse) {
          z.erase(z.begin() + static_cast<std::ptrdiff_t>(i), z.begin() + static_cast<std::ptrdiff_t>(i + 2));
          changed = true;
          break;
        }
        if (defer) {
          Zigzag rest(z.begin() + static_cast<std::ptrdiff_t>(i + 2), z.end());
          defer->push_back({ideal::principal(Word{z[i].letter}), std::move(rest)});
          z.erase(z.begin() + static_cast<std::ptrdiff_t>(i), z.begin() + static_cast<std::ptrdiff_t>(i + 2));
          changed = true;
          break;
        }
      }
      if (changed) continue;
      // Normalize maximal runs of one sign.
      for (std::size_t i = 0; i < z.size();) {
        std::size_t j = i;
        while (j < z.size() && z[j].inverse == z[i].inverse) ++j;
        Word run;
        if (z[i].inverse) {
          for (std::size_t k = j; k-- > i;) run.push_back(z[k].letter);
        } else {
          for (std::size_t k = i; k < j; ++k) run.push_back(z[k].letter);
        }
        Word n = normalize(*p_, run);
        if (n != run) {
          Zigzag rep = z[i].inverse ? inverse_of(positive(n)) : positive(n);
          z.erase(z.begin() + static_cast<std::ptrdiff_t>(i), z.begin() + static_cast<std::ptrdiff_t>(j));
          z.insert(z.begin() + static_cast<std::ptrdiff_t>(i), rep.begin(), rep.end());
          changed = true;
          break;
        }
        i = j;
      }
      if (changed) continue;
      // u^-1 v: divide the positive run v by the adjacent inverse letter.
      for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        if (!z[i].inverse || z[i + 1].inverse) continue;
        std::size_t j = i + 1;
        Word v;
        while (j < z.size() && !z[j].inverse) v.push_back(z[j++].letter);
        auto u = eng_->divider().divide(z[i].letter, v);
        if (!u) continue;
        Zigzag rep = positive(*u);
        z.erase(z.begin() + static_cast<std::ptrdiff_t>(i), z.begin() + static_cast<std::ptrdiff_t>(j));
        z.insert(z.begin() + static_cast<std::ptrdiff_t>(i), rep.begin(), rep.end());
        changed = true;
        break;
      }
    }
    return z;
  }

  /// Canonical form: reduced body; idempotents reduced, deduplicated, sorted,
  /// and dropped when their domain is all of S.
  HullElement canonical(const Zigzag& z, std::vector<Deferred> deferred = {}) const {
    HullElement h;
    h.body = reduce(z, &deferred);
    std::vector<std::pair<std::string, Deferred>> keyed;
    for (auto& d : deferred) {
      d.pre = reduce(d.pre, nullptr);
      bool all_positive = std::all_of(d.pre.begin(), d.pre.end(), [](const SLetter& s) { return !s.inverse; });
      if (all_positive && d.ideal->kind == IdealKind::principal && d.ideal->word.empty()) continue;
      std::string key = format_deferred(p_->alphabet, d);
      if (std::any_of(keyed.begin(), keyed.end(), [&](const auto& k) { return k.first == key; })) continue;
      keyed.emplace_back(std::move(key), std::move(d));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& k : keyed) h.deferred.push_back(std::move(k.second));
    return h;
  }

  HullElement identity() const { return {}; }

  HullElement idempotent(const Ideal& J) const { return canonical({}, {Deferred{J, {}}}); }

  /// h1 ∘ h2: h2 acts first.
  HullElement compose(const HullElement& h1, const HullElement& h2) const {
    if (h1.zero || h2.zero) return zero();
    std::vector<Deferred> d;
    for (const auto& x : h1.deferred) {
      Zigzag pre = x.pre;
      pre.insert(pre.end(), h2.body.begin(), h2.body.end());
      d.push_back({x.ideal, std::move(pre)});
    }
    d.insert(d.end(), h2.deferred.begin(), h2.deferred.end());
    Zigzag body = h1.body;
    body.insert(body.end(), h2.body.begin(), h2.body.end());
    return canonical(body, std::move(d));
  }

  HullElement invert(const HullElement& h) const {
    if (h.zero) return zero();
    Zigzag inv = inverse_of(h.body);
    std::vector<Deferred> d;
    for (const auto& x : h.deferred) {
      Zigzag pre = x.pre;
      pre.insert(pre.end(), inv.begin(), inv.end());
      d.push_back({x.ideal, std::move(pre)});
    }
    return canonical(inv, std::move(d));
  }

  static HullElement zero() {
    HullElement h;
    h.zero = true;
    return h;
  }

  // -- action ---------------------------------------------------------------

  /// Literal evaluation of a zigzag, right to left, on a normal form.
  std::optional<Word> run(const Zigzag& z, Word w) const {
    for (auto it = z.rbegin(); it != z.rend(); ++it) {
      if (!it->inverse) {
        w.insert(w.begin(), it->letter);
        w = normalize(*p_, std::move(w));
        continue;
      }
      auto u = eng_->divider().divide(it->letter, w);
      if (!u) return std::nullopt;
      w = std::move(*u);
    }
    return w;
  }

  bool in_domain(const Deferred& d, const Word& w) const {
    auto v = run(d.pre, w);
    return v && eng_->contains(d.ideal, *v);
  }

  /// Image of the normal form `w`, or nothing when w is outside dom h.
  std::optional<Word> apply(const HullElement& h, const Word& w) const {
    if (h.zero) return std::nullopt;
    for (const auto& d : h.deferred)
      if (!in_domain(d, w)) return std::nullopt;
    return run(h.body, w);
  }

  bool fixes(const HullElement& h, const Word& w) const {
    auto v = apply(h, w);
    return v && *v == w;
  }

  // -- domains --------------------------------------------------------------

  /// {w : z(w) defined and in J}, as an ideal description.
  Ideal pullback(const Zigzag& z, Ideal J) const {
    for (const SLetter& s : z) {
      if (s.inverse) J = eng_->translate(Word{s.letter}, J);
      else J = eng_->preimage(s.letter, J);
    }
    return J;
  }

  Ideal domain(const HullElement& h) const {
    if (h.zero) return ideal::empty();
    Ideal J = pullback(h.body, ideal::whole());
    for (const auto& d : h.deferred) J = eng_->intersect(J, pullback(d.pre, d.ideal));
    return J;
  }

  const Trace& domain_trace(const HullElement& h) const { return eng_->trace(domain(h)); }

  /// Ball words fixed by h. Enumerates the ball; for small balls.
  std::vector<Word> fixed_points(const HullElement& h) const {
    std::vector<Word> out;
    for (const auto& w : eng_->ball().words())
      if (fixes(h, w)) out.push_back(w);
    return out;
  }

  /// Same domain trace and same images at its minimal elements. By right
  /// equivariance this is equality on the whole ball.
  bool equal_on_ball(const HullElement& a, const HullElement& b) const {
    const Trace& da = domain_trace(a);
    if (!(da == domain_trace(b))) return false;
    for (const auto& m : da.minimal())
      if (apply(a, m) != apply(b, m)) return false;
    return true;
  }

  /// Every ball element of `t` lies in dom h and is fixed by h.
  bool fixes_trace(const HullElement& h, const Trace& t) const {
    return std::all_of(t.minimal().begin(), t.minimal().end(), [&](const Word& m) { return fixes(h, m); });
  }

  // -- parsing --------------------------------------------------------------

  /// Tokens: `a`, `x[3]`, `b^-1`, `p[bS]`, `p[Family(b)]`, `e`, `0`.
  HullElement parse(std::string_view text) const {
    Zigzag body;
    std::vector<Deferred> deferred;
    bool zero_seen = false;
    std::size_t i = 0;
    auto fail = [&](const std::string& what) {
      throw ParseError(what + " in zigzag '" + std::string(text) + "'", 1, static_cast<int>(i) + 1);
    };
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
        continue;
      }
      std::size_t b = i;
      int depth = 0;
      while (i < text.size() && (depth > 0 || !std::isspace(static_cast<unsigned char>(text[i])))) {
        if (text[i] == '[' || text[i] == '(') ++depth;
        if (text[i] == ']' || text[i] == ')') --depth;
        ++i;
      }
      std::string tok(text.substr(b, i - b));
      if (!deferred.empty() && tok.rfind("p[", 0) != 0) fail("idempotents must come last");
      if (tok == "0") {
        zero_seen = true;
        continue;
      }
      if (tok == "e" && p_->alphabet.find("e") < 0) continue;
      if (tok.rfind("p[", 0) == 0 && p_->alphabet.find("p") < 0) {
        if (tok.back() != ']') fail("unterminated idempotent");
        std::string inner = tok.substr(2, tok.size() - 3);
        Ideal J;
        if (inner.size() >= 2 && inner.back() == 'S' && inner.find('(') == std::string::npos)
          J = ideal::principal(normalize(*p_, p_->alphabet.parse_word(inner.substr(0, inner.size() - 1))));
        else
          J = parse_ideal(*p_, inner);
        deferred.push_back({J, {}});
        continue;
      }
      bool inv = false;
      if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
        inv = true;
        tok.resize(tok.size() - 3);
      }
      try {
        body.push_back({p_->alphabet.parse_letter(tok), inv});
      } catch (const ParseError& e) {
        fail(e.what());
      }
    }
    if (zero_seen) return zero();
    return canonical(body, std::move(deferred));
  }

  std::string format(const HullElement& h) const { return format_hull(p_->alphabet, h); }

private:
  const IdealEngine* eng_;
  const Presentation* p_;
};

}  // namespace hull_lab
