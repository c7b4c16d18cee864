#pragma once

#include <set>

#include "hull_lab/hull.hpp"
#include "hull_lab/spectrum.hpp"

namespace hull_lab {

/// Every ball element of X minus the removed ideals is fixed by some h_k,
/// and that set is nonempty. Requires X inside each dom h_k on the ball.
inline Verdict condition1_check(const HullCalculus& hc, const GeneralizedIdeal& X, const std::vector<HullElement>& hs) {
  const IdealEngine& eng = hc.engine();
  const Trace& tx = eng.trace(X.base);
  for (std::size_t k = 0; k < hs.size(); ++k)
    if (!tx.subset_of(hc.domain_trace(hs[k])))
      throw PreconditionError("X is not inside the domain of h" + std::to_string(k + 1) + " on the ball");
  if (!eng.nonempty(X)) return Verdict::make(Status::fails, {}, "X has empty trace on the ball");
  auto bad = eng.first_outside(X, [&](const Word& m) {
    return std::any_of(hs.begin(), hs.end(), [&](const HullElement& h) { return hc.fixes(h, m); });
  });
  if (bad) return Verdict::make(Status::fails, {*bad}, "element fixed by no h_k");
  return Verdict::make(Status::holds, {}, "every element fixed, up to " + eng.ball().describe());
}

enum class WitnessKind { strong, cstar, gp_eq_g };

/// One piece Y_j of a witness: base minus removed, with its hull index.
struct WitnessPart {
  GeneralizedIdeal Y;
  std::size_t k = 0;
};

struct WitnessResult {
  Verdict verdict;
  std::vector<WitnessPart> parts;
  std::vector<Word> uncovered;  // obstruction, when no witness exists
  std::size_t examined = 0;
};

namespace detail {

// h fixes every minimal element of Y on the engine's ball. By right
// equivariance Y then lies in dom h and h is the identity on it.
inline bool part_valid(const HullCalculus& hc, const WitnessPart& part, const HullElement& h) {
  return !hc.engine().first_outside(part.Y, [&](const Word& m) { return hc.fixes(h, m); });
}

inline std::vector<Word> uncovered_by(const HullCalculus& hc, const GeneralizedIdeal& X,
                                      const std::vector<WitnessPart>& parts) {
  const IdealEngine& eng = hc.engine();
  std::vector<Word> out;
  for (const auto& m : eng.trace(X.base).minimal()) {
    if (eng.in_removed(X, m)) continue;
    bool hit = std::any_of(parts.begin(), parts.end(), [&](const WitnessPart& p) { return eng.contains(p.Y, m); });
    if (!hit) out.push_back(m);
  }
  return out;
}

}  // namespace detail

/// Searches tracked ideals Y_j (for cstar: Y_j minus the removed ideals of X)
/// with h_{k_j} the identity on Y_j and the Y_j covering X minus the removed
/// ideals. A witness found on the closure's ball is accepted only if it
/// still covers, and the h_{k_j} still fix the Y_j, with every description
/// re-evaluated on the window widened by `widen`.
inline WitnessResult regularity_witness(const Closure& c, const GeneralizedIdeal& X, const std::vector<HullElement>& hs,
                                        WitnessKind kind, std::size_t budget, int widen = 2) {
  const IdealEngine& eng = *c.engine;
  HullCalculus hc(eng);
  IdealEngine wide_eng(eng.presentation(), eng.ball().widened(widen));
  HullCalculus wide(wide_eng);
  WitnessResult res;

  std::vector<WitnessPart> cands;
  auto consider = [&](WitnessPart part) -> bool {
    if (res.examined >= budget) return false;
    ++res.examined;
    if (detail::part_valid(hc, part, hs[part.k]) && detail::part_valid(wide, part, hs[part.k]))
      cands.push_back(std::move(part));
    return true;
  };
  bool exhausted = false;
  // X itself is constructible, so it is always a candidate.
  for (std::size_t k = 0; k < hs.size() && !exhausted; ++k) {
    GeneralizedIdeal self = kind == WitnessKind::cstar ? X : GeneralizedIdeal{X.base, {}};
    if (!consider({self, k})) exhausted = true;
  }
  for (std::size_t y = 0; y < c.reps.size() && !exhausted; ++y) {
    if (c.reps[y].trace.empty()) continue;
    for (std::size_t k = 0; k < hs.size() && !exhausted; ++k) {
      if (!consider({GeneralizedIdeal{c.reps[y].ideal, {}}, k})) exhausted = true;
      if (kind == WitnessKind::cstar && !X.removed.empty() && !exhausted)
        if (!consider({GeneralizedIdeal{c.reps[y].ideal, X.removed}, k})) exhausted = true;
    }
  }

  auto narrow = detail::uncovered_by(hc, X, cands);
  auto broad = detail::uncovered_by(wide, X, cands);
  if (!narrow.empty() || !broad.empty()) {
    res.uncovered = narrow.empty() ? broad : narrow;
    std::string note;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < hs.size(); ++k) names.push_back("Fix(" + hc.format(hs[k]) + ")");
    std::string fixes;
    for (std::size_t i = 0; i < names.size(); ++i) fixes += (i ? " ∪ " : "") + names[i];
    bool any_meets = std::any_of(cands.begin(), cands.end(), [&](const WitnessPart& p) {
      return !meet(eng.trace(p.Y.base), eng.trace(X.base)).empty();
    });
    if (cands.empty() || !any_meets) {
      note = "no tracked ideal inside " + fixes + " meets X";
    } else if (narrow.empty()) {
      note = "tracked ideals inside " + fixes + " cover X only on window " + eng.ball().window().str() +
             "; on window " + wide_eng.ball().window().str() + " they miss " + std::to_string(broad.size()) +
             " minimal elements of X";
    } else {
      note = "tracked ideals inside " + fixes + " miss " + std::to_string(narrow.size()) + " minimal elements of X";
    }
    if (exhausted) note += " (budget " + std::to_string(budget) + " exhausted)";
    res.verdict = Verdict::make(Status::unknown, res.uncovered, note);
    return res;
  }

  // Drop redundant parts while the cover survives on both windows.
  std::vector<WitnessPart> parts = cands;
  for (std::size_t i = parts.size(); i-- > 0;) {
    std::vector<WitnessPart> trial = parts;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    if (detail::uncovered_by(hc, X, trial).empty() && detail::uncovered_by(wide, X, trial).empty())
      parts = std::move(trial);
  }
  res.parts = std::move(parts);
  res.verdict = Verdict::make(Status::holds, {}, "witness up to " + eng.ball().describe() + ", uniform on window " +
                                                      wide_eng.ball().window().str());
  return res;
}

inline WitnessResult strong_regularity_witness(const Closure& c, const GeneralizedIdeal& X,
                                               const std::vector<HullElement>& hs, std::size_t budget) {
  return regularity_witness(c, X, hs, WitnessKind::strong, budget);
}

inline WitnessResult cstar_regularity_witness(const Closure& c, const GeneralizedIdeal& X,
                                              const std::vector<HullElement>& hs, std::size_t budget) {
  return regularity_witness(c, X, hs, WitnessKind::cstar, budget);
}

/// Tracked Y_j covering X minus the removed ideals with g p_{Y_j} = p_{Y_j}.
/// Requires g to fix that set pointwise on the ball.
inline WitnessResult gp_eq_g_check(const Closure& c, const HullElement& g, const GeneralizedIdeal& X,
                                   std::size_t budget) {
  HullCalculus hc(*c.engine);
  auto bad = c.engine->first_outside(X, [&](const Word& m) { return hc.fixes(g, m); });
  if (bad)
    throw PreconditionError("g does not fix " + c.engine->presentation().alphabet.format(*bad) +
                            ", an element of X");
  return regularity_witness(c, X, {g}, WitnessKind::gp_eq_g, budget);
}

// ---------------------------------------------------------------------------
// Hausdorffness failure

struct HausdorffWitness {
  HullElement g;
  Sequence seq;
  LimitCharacter limit;
};

/// Triples (g, seq, chi): g fixes every seq(n), chi_{seq(n)} converges to
/// chi, and every tracked J with chi(J) = 1 has an element g does not fix.
/// g ranges over window letters, seq over p f[n] with |p| <= 1 and f an
/// indexed family.
inline std::vector<HausdorffWitness> hausdorff_witness_search(const Closure& c, const Window& seq_window,
                                                              std::size_t budget = 100000) {
  const IdealEngine& eng = *c.engine;
  const Presentation& p = eng.presentation();
  HullCalculus hc(eng);
  std::vector<HausdorffWitness> out;
  std::vector<std::string> prefixes{""};
  for (std::size_t s = 0; s < p.alphabet.size(); ++s)
    if (!p.alphabet[s].indexed) prefixes.push_back(p.alphabet[s].name + " ");
  std::vector<Sequence> seqs;
  for (auto f : p.indexed_symbols())
    for (const auto& pre : prefixes) {
      Sequence s = parse_sequence(p, pre + p.alphabet[f].name + "[n]");
      if (is_normal(p, s.at(0))) seqs.push_back(std::move(s));
    }
  std::size_t spent = 0;
  for (const Letter& x : eng.ball().letters()) {
    HullElement g = hc.canonical({SLetter{x, false}});
    for (const auto& s : seqs) {
      if (++spent > budget) return out;
      bool fixed = true;
      for (int n = seq_window.lo; n <= seq_window.hi && fixed; ++n) fixed = hc.fixes(g, normalize(p, s.at(n)));
      if (!fixed) continue;
      LimitCharacter lim = limit_character(c, s, seq_window);
      if (!lim.converged()) continue;
      bool moved_everywhere = true;
      for (int j : lim.chi.support()) {
        const auto& ms = c.reps[j].trace.minimal();
        if (std::all_of(ms.begin(), ms.end(), [&](const Word& m) { return hc.fixes(g, m); })) moved_everywhere = false;
      }
      if (moved_everywhere) out.push_back({g, s, lim});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps over short hull elements

/// Canonical hull elements of all signed words of length <= max_len over the
/// ball letters, deduplicated by canonical form.
inline std::vector<HullElement> enumerate_hull(const HullCalculus& hc, std::size_t max_len) {
  std::vector<SLetter> alphabet;
  for (const Letter& l : hc.engine().ball().letters()) {
    alphabet.push_back({l, false});
    alphabet.push_back({l, true});
  }
  std::vector<HullElement> out;
  std::set<std::string> seen;
  std::vector<Zigzag> layer{Zigzag{}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::vector<Zigzag> next;
    for (const auto& z : layer) {
      HullElement h = hc.canonical(z);
      if (seen.insert(hc.format(h)).second) out.push_back(std::move(h));
      if (len == max_len) continue;
      for (const auto& s : alphabet) {
        Zigzag w = z;
        w.push_back(s);
        next.push_back(std::move(w));
      }
    }
    layer = std::move(next);
  }
  return out;
}

struct FixSweepReport {
  std::size_t enumerated = 0;
  std::size_t matching = 0;  // fix the word and contain the ideal in their domain
  std::vector<HullElement> exceptions;
};

/// Hull elements of zigzag length <= max_len that fix `w` and whose domain
/// contains J, checked to be e or p_J on the ball.
inline FixSweepReport fix_sweep(const HullCalculus& hc, const Word& w, const Ideal& J, std::size_t max_len) {
  FixSweepReport rep;
  HullElement e = hc.identity();
  HullElement pJ = hc.idempotent(J);
  const Trace& tj = hc.engine().trace(J);
  for (const auto& h : enumerate_hull(hc, max_len)) {
    ++rep.enumerated;
    if (!hc.fixes(h, w)) continue;
    if (!tj.subset_of(hc.domain_trace(h))) continue;
    ++rep.matching;
    if (!hc.equal_on_ball(h, e) && !hc.equal_on_ball(h, pJ)) rep.exceptions.push_back(h);
  }
  return rep;
}

}  // namespace hull_lab
