#pragma once

#include <cmath>
#include <optional>

#include "hull_lab/closure.hpp"

namespace hull_lab {

/// A {0,1}-valued map on the tracked representatives of a closure.
struct SemiCharacter {
  std::vector<std::uint8_t> values;

  bool operator[](std::size_t i) const { return values.at(i) != 0; }
  friend bool operator==(const SemiCharacter&, const SemiCharacter&) = default;

  std::vector<int> support() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i]) out.push_back(static_cast<int>(i));
    return out;
  }
};

/// chi_s(p_X) = 1 iff s lies in X.
inline SemiCharacter chi_of(const Closure& c, const Word& s) {
  Word z = normalize(c.engine->presentation(), s);
  SemiCharacter chi;
  for (const auto& r : c.reps) chi.values.push_back(c.engine->contains(r.ideal, z) ? 1 : 0);
  return chi;
}

/// Filter axioms on the tracked list; returns the first violation.
inline std::optional<std::string> filter_violation(const Closure& c, const SemiCharacter& chi) {
  int whole = c.find(ideal::whole());
  if (whole >= 0 && !chi[whole]) return "chi(S) = 0";
  std::size_t n = c.reps.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int k = c.table[i][j];
      if (k >= 0 && (chi[i] && chi[j]) != chi[k])
        return "not multiplicative on " + c.describe(i) + " and " + c.describe(j);
      if (chi[i] && !chi[j] && c.reps[i].trace.subset_of(c.reps[j].trace))
        return "not upward closed from " + c.describe(i) + " to " + c.describe(j);
    }
  return std::nullopt;
}

/// X = union of parts, each a proper tracked subideal.
struct Cover {
  int whole = -1;
  std::vector<int> parts;
};

namespace detail {

inline bool covers(const IdealEngine& eng, const Ideal& X, const std::vector<Ideal>& parts) {
  for (const auto& m : eng.trace(X).minimal()) {
    bool hit = std::any_of(parts.begin(), parts.end(), [&](const Ideal& Y) { return eng.trace(Y).contains(m); });
    if (!hit) return false;
  }
  return std::all_of(parts.begin(), parts.end(), [&](const Ideal& Y) { return eng.trace(Y).subset_of(eng.trace(X)); });
}

}  // namespace detail

/// Cover relations among tracked ideals that hold on the ball and still hold
/// with every description re-evaluated on a window widened by `widen`.
/// Each reported cover is irredundant.
inline std::vector<Cover> find_covers(const Closure& c, int widen = 2) {
  std::vector<Cover> out;
  IdealEngine wide(c.engine->presentation(), c.ball().widened(widen));
  for (std::size_t x = 0; x < c.reps.size(); ++x) {
    const Trace& tx = c.reps[x].trace;
    if (tx.empty()) continue;
    std::vector<int> subs;
    for (std::size_t y = 0; y < c.reps.size(); ++y)
      if (y != x && !c.reps[y].trace.empty() && c.reps[y].trace.subset_of(tx)) subs.push_back(static_cast<int>(y));
    auto ideals_of = [&](const std::vector<int>& idx) {
      std::vector<Ideal> v;
      for (int i : idx) v.push_back(c.reps[i].ideal);
      return v;
    };
    const Ideal& X = c.reps[x].ideal;
    auto holds = [&](const std::vector<int>& idx) {
      auto parts = ideals_of(idx);
      return detail::covers(*c.engine, X, parts) && detail::covers(wide, X, parts);
    };
    if (subs.empty() || !holds(subs)) continue;
    for (std::size_t k = subs.size(); k-- > 0;) {
      std::vector<int> trial = subs;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
      if (!trial.empty() && holds(trial)) subs = std::move(trial);
    }
    out.push_back({static_cast<int>(x), subs});
  }
  return out;
}

/// Conditions (i) and (ii), relative to the supplied covers.
inline Verdict is_in_omega(const Closure& c, const SemiCharacter& chi, const std::vector<Cover>& covers) {
  int empty = c.find(Trace{});
  if (empty >= 0 && chi[empty]) return Verdict::make(Status::fails, {}, "condition (i): chi(0) = 1");
  for (const auto& cv : covers) {
    if (!chi[cv.whole]) continue;
    bool some = std::any_of(cv.parts.begin(), cv.parts.end(), [&](int i) { return chi[i]; });
    if (!some) return Verdict::make(Status::fails, {}, "condition (ii) fails on the cover of " + c.describe(cv.whole));
  }
  return Verdict::make(Status::holds, {}, "relative to " + std::to_string(covers.size()) + " covers");
}

/// A family of words seq(n): a pattern in one index variable.
struct Sequence {
  std::vector<PatternLetter> pattern;
  std::string text;

  Word at(int n) const { return Presentation::instantiate(pattern, Binding{n}); }
};

inline Sequence parse_sequence(const Presentation& p, std::string_view text) {
  Sequence s;
  s.text = std::string(text);
  std::vector<std::string> vars;
  for (const auto& tok : detail::split_tokens(text, 1)) {
    if (tok.text == "e" && p.alphabet.find("e") < 0) continue;
    s.pattern.push_back(detail::parse_pattern_letter(p.alphabet, tok, vars, true, 1));
  }
  if (vars.size() > 1) throw ParseError("a sequence takes one index variable");
  return s;
}

struct LimitCharacter {
  SemiCharacter chi;
  std::vector<int> divergent;  // tracked ideals without a common stable value
  Window window;

  bool converged() const { return divergent.empty(); }
};

/// Sequence window whose outer thirds lie outside the ball window, so that
/// ideals named by window letters do not flip inside the tails.
inline Window sequence_window(const Window& w) {
  int len = w.hi - w.lo + 1;
  return Window{w.lo - 2 * len, w.hi + 2 * len};
}

/// Eventual value of chi_{seq(n)} as n -> ±infinity, read off the outer
/// `tail` fraction of the window at both ends.
inline LimitCharacter limit_character(const Closure& c, const Sequence& seq, const Window& window,
                                      double tail = 1.0 / 3.0) {
  int len = window.hi - window.lo + 1;
  int t = std::max(1, static_cast<int>(std::ceil(len * tail)));
  std::vector<SemiCharacter> rows;
  for (int n = window.lo; n <= window.hi; ++n) rows.push_back(chi_of(c, seq.at(n)));
  LimitCharacter out;
  out.window = window;
  for (std::size_t i = 0; i < c.reps.size(); ++i) {
    bool left = rows.front()[i], right = rows.back()[i];
    bool stable = true;
    for (int k = 0; k < t; ++k) {
      if (rows[k][i] != left) stable = false;
      if (rows[len - 1 - k][i] != right) stable = false;
    }
    if (!stable || left != right) out.divergent.push_back(static_cast<int>(i));
    out.chi.values.push_back(stable && left == right && left ? 1 : 0);
  }
  return out;
}

}  // namespace hull_lab
