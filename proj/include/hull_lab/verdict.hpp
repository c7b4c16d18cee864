#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hull_lab/word.hpp"

namespace hull_lab {

enum class Status { holds, fails, unknown };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::holds: return "holds";
    case Status::fails: return "fails";
    case Status::unknown: return "unknown";
  }
  return "?";
}

/// Three-valued answer. `holds`/`fails` carry a checkable certificate in
/// `words` (a tau-sequence, a cofactor, a counterexample); `unknown` carries
/// the exhausted bound in `note`.
struct Verdict {
  Status status = Status::unknown;
  std::vector<Word> words;
  std::string note;
  std::size_t explored = 0;

  bool holds() const { return status == Status::holds; }
  bool fails() const { return status == Status::fails; }
  bool unknown() const { return status == Status::unknown; }

  static Verdict make(Status s, std::vector<Word> words = {}, std::string note = {}) {
    Verdict v;
    v.status = s;
    v.words = std::move(words);
    v.note = std::move(note);
    return v;
  }
};

}  // namespace hull_lab
