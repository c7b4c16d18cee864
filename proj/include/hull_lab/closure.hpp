#pragma once

#include <deque>

#include "hull_lab/ideals.hpp"

namespace hull_lab {

struct ClosureConfig {
  std::size_t budget = 500;       // maximum number of representatives
  std::size_t max_word = 2;       // longest description word produced by translation
};

/// A tracked ideal: description plus its ball trace.
struct Tracked {
  Ideal ideal;
  Trace trace;
};

/// Representatives of the constructible ideals found on a ball, deduplicated
/// by trace, with their intersection table.
struct Closure {
  std::shared_ptr<IdealEngine> engine;
  std::vector<Tracked> reps;
  std::vector<std::vector<int>> table;  // index of reps[i] ∩ reps[j], -1 if untracked
  bool saturated = false;
  std::size_t operations = 0;

  const Ball& ball() const { return engine->ball(); }
  std::string describe(std::size_t i) const { return engine->describe(reps[i].ideal); }

  int find(const Trace& t) const {
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (reps[i].trace == t) return static_cast<int>(i);
    return -1;
  }

  int find(const Ideal& I) const { return find(engine->trace(I)); }

  /// Hash of the tracked list, carried by every report over this closure.
  std::string hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& r : reps) h = (h ^ r.trace.hash()) * 1099511628211ull;
    return hex64(h);
  }
};

/// Starts from {S} and closes under preimage by window letters, translation
/// by window letters (description words up to `max_word`), and pairwise
/// intersection. Opaque results are upgraded to closed forms when their
/// traces match.
inline Closure semilattice_closure(const Presentation& p, const Ball& ball, const ClosureConfig& cfg = {}) {
  Closure c;
  c.engine = std::make_shared<IdealEngine>(p, ball);
  const IdealEngine& eng = *c.engine;
  std::map<Trace, int> index;
  std::deque<int> work;
  bool exhausted = false;

  auto add = [&](const Ideal& raw) -> int {
    ++c.operations;
    const Trace& t = eng.trace(raw);
    auto it = index.find(t);
    if (it != index.end()) return it->second;
    if (c.reps.size() >= cfg.budget) {
      exhausted = true;
      return -1;
    }
    Ideal I = eng.classify(raw);
    int id = static_cast<int>(c.reps.size());
    c.reps.push_back({I, t});
    index.emplace(t, id);
    work.push_back(id);
    return id;
  };

  add(ideal::whole());
  std::vector<int> done;
  std::map<std::pair<int, int>, int> meets;
  while (!work.empty()) {
    int i = work.front();
    work.pop_front();
    Ideal I = c.reps[i].ideal;
    for (const Letter& x : ball.letters()) add(eng.preimage(x, I));
    if (shape_of(I) != Shape::opaque)
      for (const Letter& x : ball.letters()) {
        Ideal J = eng.translate(Word{x}, I);
        if (shape_of(J) == Shape::opaque || J->word.size() <= cfg.max_word) add(J);
      }
    done.push_back(i);
    for (int j : done) {
      Ideal J = eng.intersect(c.reps[i].ideal, c.reps[j].ideal);
      int k = add(J);
      meets[{i, j}] = k;
      meets[{j, i}] = k;
    }
  }
  c.saturated = !exhausted;
  std::size_t n = c.reps.size();
  c.table.assign(n, std::vector<int>(n, -1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto it = meets.find({static_cast<int>(i), static_cast<int>(j)});
      if (it != meets.end() && it->second >= 0) {
        c.table[i][j] = it->second;
        continue;
      }
      auto f = index.find(meet(c.reps[i].trace, c.reps[j].trace));
      if (f != index.end()) c.table[i][j] = f->second;
    }
  return c;
}

/// Representatives whose traces contain every listed word.
inline std::vector<int> ideals_containing(const Closure& c, const std::vector<Word>& words) {
  std::vector<int> out;
  for (std::size_t i = 0; i < c.reps.size(); ++i) {
    bool all = std::all_of(words.begin(), words.end(), [&](const Word& w) { return c.reps[i].trace.contains(w); });
    if (all) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace hull_lab
