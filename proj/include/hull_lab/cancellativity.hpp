#pragma once

#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "hull_lab/ball.hpp"

namespace hull_lab {

/// Left division by single letters, backed by a memo of equivalence
/// classes. A class is searched over words of length at most |z| + 1, so a
/// cofactor u of a letter satisfies |u| <= |z|.
class Divider {
public:
  explicit Divider(const Presentation& p, std::size_t class_budget = 200000) : p_(&p), budget_(class_budget) {}

  const Presentation& presentation() const { return *p_; }

  /// Words equivalent to the normal form `z` of length at most |z| + 1.
  const std::vector<Word>& equivalence_class(const Word& z) const {
    auto it = memo_.find(z);
    if (it != memo_.end()) return *it->second;
    if (memo_.size() > 400000) memo_.clear();
    auto cls = std::make_shared<std::vector<Word>>();
    std::unordered_set<Word, WordHash> seen{z};
    cls->push_back(z);
    std::size_t cap = z.size() + 1;
    for (std::size_t i = 0; i < cls->size(); ++i) {
      if (cls->size() > budget_) throw BudgetExceeded("equivalence class of size > " + std::to_string(budget_));
      for (auto& n : tau_neighbours(*p_, (*cls)[i], cap))
        if (seen.insert(n).second) cls->push_back(std::move(n));
    }
    return *memo_.emplace(z, std::move(cls)).first->second;
  }

  /// Cofactor u (normal form) with l·u equivalent to z, if any.
  std::optional<Word> divide(Letter l, const Word& z) const {
    if (!z.empty() && z.front() == l) return Word(z.begin() + 1, z.end());
    for (const Word& w : equivalence_class(z))
      if (!w.empty() && w.front() == l) return normalize(*p_, Word(w.begin() + 1, w.end()));
    return std::nullopt;
  }

  /// Cofactor u with s·u equivalent to w, by iterated letter division.
  std::optional<Word> cofactor(const Word& s, const Word& w) const { return cofactor_normal(s, normalize(*p_, w)); }

  /// As `cofactor`, for `z` already in normal form.
  std::optional<Word> cofactor_normal(const Word& s, Word z) const {
    for (const Letter& l : s) {
      auto r = divide(l, z);
      if (!r) return std::nullopt;
      z = std::move(*r);
    }
    return z;
  }

  /// Letters l such that l divides z.
  std::vector<Letter> leading_letters(const Word& z) const {
    std::vector<Letter> out;
    for (const Word& w : equivalence_class(z))
      if (!w.empty() && std::find(out.begin(), out.end(), w.front()) == out.end()) out.push_back(w.front());
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  const Presentation* p_;
  std::size_t budget_;
  mutable std::unordered_map<Word, std::shared_ptr<std::vector<Word>>, WordHash> memo_;
};

/// Does s left-divide w? holds carries the cofactor u; fails means no
/// cofactor of length <= |w| exists.
inline Verdict left_divides(const Presentation& p, const Word& s, const Word& w, std::size_t bound) {
  Divider d(p);
  Word z = normalize(p, w);
  bool exact = p.length_non_increasing();
  std::size_t explored = 0;
  for (const Letter& l : s) {
    std::optional<Word> r;
    try {
      r = d.divide(l, z);
      explored += d.equivalence_class(z).size();
    } catch (const BudgetExceeded& e) {
      return Verdict::make(Status::unknown, {}, e.what());
    }
    if (!r) {
      Verdict v = exact && z.size() <= bound
                      ? Verdict::make(Status::fails, {}, "no word equivalent to " + p.alphabet.format(z) +
                                                             " begins with " + p.alphabet.format(l))
                      : Verdict::make(Status::unknown, {}, "cofactor search bound " + std::to_string(bound));
      v.explored = explored;
      return v;
    }
    z = std::move(*r);
  }
  if (z.size() > bound) return Verdict::make(Status::unknown, {}, "cofactor longer than bound");
  Verdict v = Verdict::make(Status::holds, {z});
  v.explored = explored;
  return v;
}

/// Verifies left cancellativity on the ball: for each letter x, distinct
/// ball words w, w' with x·w, x·w' in the ball and x·w ~ x·w' are reported.
/// Equal normal forms decide equivalence only on windows certified confluent.
inline Verdict check_left_cancellative(const Presentation& p, int radius, const Window& window,
                                       std::size_t bound = 64) {
  Ball ball(p, radius, window);
  auto conf = check_confluence(p, window.widened(1));
  std::vector<Word> words = ball.with_radius(std::max(radius - 1, 0)).words();
  std::size_t checked = 0;
  bool unsure = false;
  std::string unsure_note;
  // Shortest x·w first: iterate w by shortlex, x inside.
  std::map<std::pair<std::uint16_t, std::int32_t>, std::unordered_map<Word, Word, WordHash>> images;
  for (const Word& w : words) {
    for (const Letter& x : ball.letters()) {
      Word xw = normalize(p, concat(Word{x}, w));
      if (!ball.contains(xw)) continue;
      ++checked;
      auto& m = images[{x.symbol, x.index}];
      auto [it, fresh] = m.emplace(xw, w);
      if (fresh) continue;
      // Two distinct normal forms w0 < w share the image x·w.
      Verdict e = equivalent(p, it->second, w, bound);
      if (e.holds()) continue;
      if (e.fails()) {
        Verdict v = Verdict::make(Status::fails, {Word{x}, it->second, w},
                                  "x w and x w' are equivalent but w and w' are not");
        v.explored = checked;
        return v;
      }
      unsure = true;
      unsure_note = "equivalence undecided for " + p.alphabet.format(it->second) + " and " + p.alphabet.format(w);
    }
  }
  Verdict v;
  v.explored = checked;
  if (unsure) {
    v.status = Status::unknown;
    v.note = unsure_note;
  } else if (!conf.certified()) {
    v.status = Status::unknown;
    v.note = "no collision found, but confluence is not certified on window " + conf.window.str();
  } else {
    v.status = Status::holds;
    v.note = "verified up to radius " + std::to_string(radius) + ", window " + window.str();
  }
  return v;
}

}  // namespace hull_lab
