#pragma once

#include <random>
#include <string>
#include <vector>

#include "hull_lab/ball.hpp"

namespace testsupport {

using namespace hull_lab;

inline Word W(const Presentation& p, const std::string& s) { return p.alphabet.parse_word(s); }

inline std::string F(const Presentation& p, const Word& w) { return p.alphabet.format(w); }

/// Uniform letters from the window alphabet.
inline Word random_word(std::mt19937& rng, const std::vector<Letter>& letters, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  Word w(len(rng));
  for (auto& l : w) l = letters[pick(rng)];
  return w;
}

/// Random ball element: a random word normalized until it fits.
inline Word random_ball_word(std::mt19937& rng, const Ball& ball) {
  while (true) {
    Word w = normalize(ball.presentation(), random_word(rng, ball.letters(), ball.radius() + 2));
    if (ball.contains(w)) return w;
  }
}

/// Every word over `letters` of length <= n, by brute force.
inline std::vector<Word> all_words(const std::vector<Letter>& letters, std::size_t n) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= n; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (const Letter& l : letters) {
        Word w = out[i];
        w.push_back(l);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

/// Shift every indexed letter by `k`.
inline Word shift(const Presentation& p, Word w, int k) {
  for (auto& l : w)
    if (p.alphabet.is_indexed(l)) l.index += k;
  return w;
}

}  // namespace testsupport
