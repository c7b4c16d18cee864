#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hull_lab/presentation.hpp"
#include "hull_lab/verdict.hpp"

namespace hull_lab {

struct Redex {
  std::size_t pos = 0;
  std::size_t rule = 0;
  Binding binding;
};

inline constexpr std::size_t kDefaultStepBudget = 100000;

/// Leftmost redex starting at or after `from`; ties go to the earlier rule.
inline std::optional<Redex> find_redex(const Presentation& p, const Word& w, std::size_t from = 0) {
  Binding b;
  for (std::size_t pos = from; pos < w.size(); ++pos) {
    for (std::size_t r = 0; r < p.rules.size(); ++r) {
      const auto& rule = p.rules[r];
      if (Presentation::match(rule.lhs, rule.variables.size(), w, pos, b)) return Redex{pos, r, b};
    }
  }
  return std::nullopt;
}

inline Word apply_redex(const Presentation& p, const Word& w, const Redex& rx) {
  const auto& rule = p.rules[rx.rule];
  Word out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(rx.pos));
  Word rhs = Presentation::instantiate(rule.rhs, rx.binding);
  out.insert(out.end(), rhs.begin(), rhs.end());
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(rx.pos + rule.lhs.size()), w.end());
  return out;
}

/// True iff some left-hand side occurs in `w` ending exactly at position `end`.
inline bool has_redex_ending_at(const Presentation& p, const Word& w, std::size_t end) {
  Binding b;
  for (const auto& rule : p.rules) {
    std::size_t n = rule.lhs.size();
    if (n > end + 1) continue;
    if (Presentation::match(rule.lhs, rule.variables.size(), w, end + 1 - n, b)) return true;
  }
  return false;
}

inline bool is_normal(const Presentation& p, const Word& w) { return !find_redex(p, w).has_value(); }

/// Rewrites to the fixpoint of the leftmost-redex strategy. When `trace` is
/// given it receives every intermediate word, starting with `w`.
inline Word normalize(const Presentation& p, Word w, std::vector<Word>* trace = nullptr,
                      std::size_t step_budget = kDefaultStepBudget) {
  if (trace) trace->push_back(w);
  const std::size_t back = p.max_lhs() > 0 ? p.max_lhs() - 1 : 0;
  std::size_t from = 0;
  std::size_t steps = 0;
  while (auto rx = find_redex(p, w, from)) {
    if (++steps > step_budget) throw BudgetExceeded("normalize: step budget exceeded (rules may cycle)");
    w = apply_redex(p, w, *rx);
    if (trace) trace->push_back(w);
    from = rx->pos > back ? rx->pos - back : 0;
  }
  return w;
}

/// All words one tau-step away from `w` (either rule direction), bounded in
/// length. Reverse steps whose left side has a variable absent on the right
/// are skipped; `skipped` counts them.
inline std::vector<Word> tau_neighbours(const Presentation& p, const Word& w, std::size_t max_len,
                                        std::size_t* skipped = nullptr, std::size_t* too_long = nullptr) {
  std::vector<Word> out;
  Binding b;
  auto emit = [&](std::size_t pos, std::size_t len, const Word& repl) {
    if (w.size() - len + repl.size() > max_len) {
      if (too_long) ++*too_long;
      return;
    }
    Word n(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
    n.insert(n.end(), repl.begin(), repl.end());
    n.insert(n.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + len), w.end());
    out.push_back(std::move(n));
  };
  for (const auto& rule : p.rules) {
    std::size_t nv = rule.variables.size();
    std::vector<bool> in_rhs(nv, false);
    for (const auto& pl : rule.rhs)
      if (pl.variable >= 0) in_rhs[pl.variable] = true;
    bool reversible = std::all_of(in_rhs.begin(), in_rhs.end(), [](bool x) { return x; });
    for (std::size_t pos = 0; pos <= w.size(); ++pos) {
      if (Presentation::match(rule.lhs, nv, w, pos, b))
        emit(pos, rule.lhs.size(), Presentation::instantiate(rule.rhs, b));
      if (Presentation::match(rule.rhs, nv, w, pos, b)) {
        if (reversible) {
          emit(pos, rule.rhs.size(), Presentation::instantiate(rule.lhs, b));
        } else if (skipped) {
          ++*skipped;
        }
      }
    }
  }
  return out;
}

/// Breadth-first search for a tau-sequence from `from` to `to` with at most
/// `max_steps` steps and intermediate words of length at most `max_len`.
/// Returns holds with the sequence, fails when the whole equivalence class
/// was exhausted without meeting either bound, unknown otherwise.
inline Verdict tau_bfs(const Presentation& p, const Word& from, const Word& to, std::size_t max_steps,
                       std::size_t max_len) {
  if (from == to) return Verdict::make(Status::holds, {from});
  std::unordered_map<Word, Word, WordHash> parent;
  parent.emplace(from, Word{});
  std::deque<std::pair<Word, std::size_t>> queue{{from, 0}};
  bool truncated = false;
  std::size_t skipped = 0;
  while (!queue.empty()) {
    auto [w, d] = queue.front();
    queue.pop_front();
    if (d == max_steps) {
      truncated = true;
      continue;
    }
    std::size_t pruned = 0;
    auto nb = tau_neighbours(p, w, max_len, &skipped, &pruned);
    if (skipped || pruned) truncated = true;
    for (auto& n : nb) {
      if (parent.count(n)) continue;
      parent.emplace(n, w);
      if (n == to) {
        std::vector<Word> path{n};
        Word cur = w;
        while (true) {
          path.push_back(cur);
          if (cur == from) break;
          cur = parent.at(cur);
        }
        std::reverse(path.begin(), path.end());
        Verdict v = Verdict::make(Status::holds, std::move(path));
        v.explored = parent.size();
        return v;
      }
      queue.emplace_back(std::move(n), d + 1);
    }
  }
  Verdict v;
  v.explored = parent.size();
  if (truncated) {
    v.status = Status::unknown;
    v.note = "tau-sequence search exhausted bound (steps " + std::to_string(max_steps) + ", length " +
             std::to_string(max_len) + ")";
  } else {
    v.status = Status::fails;
    v.note = "equivalence class exhausted (" + std::to_string(parent.size()) + " words)";
  }
  return v;
}

/// Checks that consecutive words of `seq` differ by one application of a
/// defining relation in either direction.
inline bool is_tau_sequence(const Presentation& p, const std::vector<Word>& seq) {
  for (std::size_t i = 1; i < seq.size(); ++i) {
    std::size_t cap = std::max(seq[i - 1].size(), seq[i].size());
    auto nb = tau_neighbours(p, seq[i - 1], cap);
    if (std::find(nb.begin(), nb.end(), seq[i]) == nb.end()) return false;
  }
  return !seq.empty();
}

struct ConcreteRule {
  Word lhs;
  Word rhs;
  std::size_t rule = 0;
};

/// Every instantiation of every schema with variables ranging over `window`.
inline std::vector<ConcreteRule> instantiate_rules(const Presentation& p, const Window& window) {
  std::vector<ConcreteRule> out;
  for (std::size_t r = 0; r < p.rules.size(); ++r) {
    const auto& rule = p.rules[r];
    std::size_t nv = rule.variables.size();
    Binding b(nv, window.lo);
    while (true) {
      out.push_back({Presentation::instantiate(rule.lhs, b), Presentation::instantiate(rule.rhs, b), r});
      std::size_t k = 0;
      while (k < nv && b[k] == window.hi) b[k++] = window.lo;
      if (k == nv) break;
      ++b[k];
    }
  }
  return out;
}

struct CriticalPair {
  Word peak;
  Word left;
  Word right;
};

/// Overlap-induced peaks among rule instances with indices in `window`:
/// proper suffix/prefix overlaps and factor inclusions.
inline std::vector<CriticalPair> critical_pairs(const Presentation& p, const Window& window) {
  auto rules = instantiate_rules(p, window);
  std::vector<CriticalPair> out;
  auto slice = [](const Word& w, std::size_t b, std::size_t e) {
    return Word(w.begin() + static_cast<std::ptrdiff_t>(b), w.begin() + static_cast<std::ptrdiff_t>(e));
  };
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = 0; j < rules.size(); ++j) {
      const Word& li = rules[i].lhs;
      const Word& lj = rules[j].lhs;
      for (std::size_t k = 1; k < std::min(li.size(), lj.size()); ++k) {
        if (!std::equal(li.end() - static_cast<std::ptrdiff_t>(k), li.end(), lj.begin())) continue;
        Word tail = slice(lj, k, lj.size());
        out.push_back({concat(li, tail), concat(rules[i].rhs, tail),
                       concat(slice(li, 0, li.size() - k), rules[j].rhs)});
      }
      if (lj.size() > li.size()) continue;
      for (std::size_t q = 0; q + lj.size() <= li.size(); ++q) {
        if (i == j && q == 0) continue;
        if (!std::equal(lj.begin(), lj.end(), li.begin() + static_cast<std::ptrdiff_t>(q))) continue;
        Word v = concat(concat(slice(li, 0, q), rules[j].rhs), slice(li, q + lj.size(), li.size()));
        out.push_back({li, rules[i].rhs, std::move(v)});
      }
    }
  }
  return out;
}

/// Local-confluence and termination evidence on an index window.
struct ConfluenceReport {
  Window window;
  std::size_t pairs = 0;
  std::size_t unjoinable = 0;
  bool terminating = false;  // every rule shortens words or decreases them in shortlex order

  bool certified() const { return terminating && unjoinable == 0; }
};

inline ConfluenceReport check_confluence(const Presentation& p, const Window& window) {
  ConfluenceReport rep;
  rep.window = window;
  rep.terminating = true;
  for (const auto& cr : instantiate_rules(p, window)) {
    if (cr.lhs.size() < cr.rhs.size()) rep.terminating = false;
    if (cr.lhs.size() == cr.rhs.size() && !shortlex_less(cr.rhs, cr.lhs)) rep.terminating = false;
  }
  for (const auto& cp : critical_pairs(p, window)) {
    ++rep.pairs;
    if (normalize(p, cp.left) != normalize(p, cp.right)) ++rep.unjoinable;
  }
  return rep;
}

/// Smallest window containing every index of the given words, widened so
/// that rewriting near them stays inside.
inline Window relevant_window(const Presentation& p, std::initializer_list<const Word*> words) {
  bool any = false;
  Window w{0, 0};
  for (const Word* word : words) {
    for (const Letter& l : *word) {
      if (!p.alphabet.is_indexed(l)) continue;
      if (!any) w = Window{l.index, l.index};
      w.lo = std::min(w.lo, static_cast<int>(l.index));
      w.hi = std::max(w.hi, static_cast<int>(l.index));
      any = true;
    }
  }
  return w.widened(static_cast<int>(p.max_rule_len()) + p.max_index_shift() + 1);
}

/// Word equivalence with a checkable certificate.
///
/// holds: a tau-sequence of at most `bound` steps (via normal forms when they
/// agree, else by search). fails: normal forms differ and the system is
/// certified confluent and terminating on the relevant window, or the
/// equivalence class was exhausted. unknown: otherwise.
inline Verdict equivalent(const Presentation& p, const Word& w1, const Word& w2, std::size_t bound) {
  std::vector<Word> t1, t2;
  Word n1 = normalize(p, w1, &t1);
  Word n2 = normalize(p, w2, &t2);
  if (n1 == n2) {
    std::vector<Word> seq = t1;
    for (auto it = t2.rbegin() + 1; it != t2.rend(); ++it) seq.push_back(*it);
    if (seq.size() - 1 <= bound) return Verdict::make(Status::holds, std::move(seq), "via normal forms");
  } else {
    auto rep = check_confluence(p, relevant_window(p, {&w1, &w2}));
    if (rep.certified())
      return Verdict::make(Status::fails, {n1, n2},
                           "normal forms differ; confluent on window " + rep.window.str());
  }
  std::size_t max_len = std::max(w1.size(), w2.size()) + bound;
  return tau_bfs(p, w1, w2, bound, max_len);
}

}  // namespace hull_lab
