#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "hull_lab/rewrite.hpp"

namespace hull_lab {

/// Finite truncation of the monoid: normal forms of length <= radius whose
/// family indices lie in the window. Normal forms are closed under taking
/// prefixes, so the ball is a trie rooted at the empty word.
class Ball {
public:
  Ball(const Presentation& p, int radius, Window window)
      : p_(&p), radius_(radius), window_(window), letters_(make_letters(p, window)) {
    if (radius < 0) throw PreconditionError("ball radius must be >= 0");
  }

  const Presentation& presentation() const { return *p_; }
  int radius() const { return radius_; }
  const Window& window() const { return window_; }
  const std::vector<Letter>& letters() const { return letters_; }

  Ball with_radius(int r) const { return Ball(*p_, r, window_); }
  Ball widened(int by) const { return Ball(*p_, radius_, window_.widened(by)); }

  bool contains(const Word& w) const {
    return static_cast<int>(w.size()) <= radius_ && word_in_window(p_->alphabet, w, window_) && is_normal(*p_, w);
  }

  /// Interior at depth d: length <= radius - d.
  bool interior(const Word& w, int depth) const { return static_cast<int>(w.size()) <= radius_ - depth; }

  /// `w + l` is a normal form, given that `w` is.
  bool extends(const Word& w, Letter l, Word& out) const {
    out = w;
    out.push_back(l);
    return !has_redex_ending_at(*p_, out, out.size() - 1);
  }

  /// Depth-first walk of the trie; `visit` returns whether to descend.
  void walk(const std::function<bool(const Word&)>& visit) const { walk_from(Word{}, visit); }

  void walk_from(const Word& root, const std::function<bool(const Word&)>& visit) const {
    std::vector<Word> stack{root};
    Word next;
    while (!stack.empty()) {
      Word w = std::move(stack.back());
      stack.pop_back();
      if (!visit(w)) continue;
      if (static_cast<int>(w.size()) >= radius_) continue;
      for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
        if (extends(w, *it, next)) stack.push_back(next);
    }
  }

  /// All ball words in shortlex order. Use only on small balls.
  std::vector<Word> words() const {
    std::vector<Word> out;
    walk([&](const Word& w) {
      out.push_back(w);
      return true;
    });
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
  }

  std::size_t size() const {
    std::size_t n = 0;
    walk([&](const Word&) {
      ++n;
      return true;
    });
    return n;
  }

  std::string describe() const {
    return "radius " + std::to_string(radius_) + ", window " + window_.str();
  }

private:
  static std::vector<Letter> make_letters(const Presentation& p, const Window& win) {
    std::vector<Letter> out;
    for (std::size_t s = 0; s < p.alphabet.size(); ++s) {
      if (!p.alphabet[s].indexed) {
        out.push_back(Letter{static_cast<std::uint16_t>(s), 0});
        continue;
      }
      for (int n = win.lo; n <= win.hi; ++n) out.push_back(Letter{static_cast<std::uint16_t>(s), n});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const Presentation* p_;
  int radius_;
  Window window_;
  std::vector<Letter> letters_;
};

}  // namespace hull_lab
