#include <gtest/gtest.h>

#include "hull_lab/closure.hpp"
#include "support.hpp"

using namespace hull_lab;
using namespace testsupport;

namespace {

Ideal P(const Presentation& p, const std::string& s) { return parse_ideal(p, s); }

// Random ideal built from the operations, depth-limited.
Ideal random_ideal(std::mt19937& rng, const IdealEngine& eng, int depth) {
  const auto& ls = eng.ball().letters();
  std::uniform_int_distribution<std::size_t> pick(0, ls.size() - 1);
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 5 : 1);
  switch (kind(rng)) {
    case 0: return ideal::principal(normalize(eng.presentation(), random_word(rng, ls, 2)));
    case 1: return ideal::family(normalize(eng.presentation(), random_word(rng, ls, 1)));
    case 2: return ideal::preimage(ls[pick(rng)], random_ideal(rng, eng, depth - 1));
    case 3: return ideal::translate(Word{ls[pick(rng)]}, random_ideal(rng, eng, depth - 1));
    case 4: return ideal::intersect(random_ideal(rng, eng, depth - 1), random_ideal(rng, eng, depth - 1));
    default: return eng.preimage(ls[pick(rng)], random_ideal(rng, eng, depth - 1));
  }
}

}  // namespace

TEST(Membership, Examples) {
  auto p = builtin::S();
  IdealEngine eng(p, Ball(p, 5, Window{-2, 2}));
  EXPECT_TRUE(eng.membership(P(p, "Principal(b)"), W(p, "a b x[0]")).holds());
  EXPECT_TRUE(eng.membership(P(p, "Family(e)"), W(p, "b")).fails());
  GeneralizedIdeal g{ideal::whole(), {P(p, "Principal(a)"), P(p, "Principal(b)")}};
  EXPECT_TRUE(eng.membership(g, W(p, "x[2]")).holds());
  EXPECT_TRUE(eng.membership(g, W(p, "a x[2]")).fails());
  EXPECT_TRUE(eng.membership(P(p, "Family(b)"), W(p, "a a b y[0] a")).holds());
}

TEST(Parse, RoundTrip) {
  auto p = builtin::S();
  for (std::string s : {"Empty", "S", "Principal(a b)", "Family(b)", "Preimage(a, Principal(b a))",
                        "Translate(b, Family(e))", "Intersect(Principal(a), Principal(b))"})
    EXPECT_EQ(describe(p.alphabet, P(p, s)), s);
  EXPECT_THROW(P(p, "Principal(q)"), ParseError);
  EXPECT_THROW(P(p, "Preimage(a b, S)"), ParseError);
  EXPECT_THROW(P(p, "Family(b) x"), ParseError);
}

TEST(Intersect, PrincipalExamples) {
  auto p = builtin::S();
  IdealEngine eng(p, Ball(p, 6, Window{-2, 2}));
  Ideal ba = eng.classify(eng.intersect(P(p, "Principal(b)"), P(p, "Principal(a)")));
  EXPECT_EQ(eng.describe(ba), "Family(b)");
  Ideal xy = eng.classify(eng.intersect(P(p, "Principal(x[0])"), P(p, "Principal(y[0])")));
  EXPECT_EQ(eng.describe(xy), "Empty");
  Ideal I = P(p, "Family(a b)");
  EXPECT_EQ(eng.describe(eng.intersect(I, ideal::whole())), "Family(a b)");
}

TEST(Intersect, TraceIsMeetOfMembership) {
  std::mt19937 rng(11);
  for (auto p : {builtin::S(), builtin::T()}) {
    IdealEngine eng(p, Ball(p, 5, Window{-1, 1}));
    auto words = eng.ball().words();
    for (int rep = 0; rep < 25; ++rep) {
      Ideal a = random_ideal(rng, eng, 2), b = random_ideal(rng, eng, 2);
      const Trace& t = eng.trace(eng.intersect(a, b));
      for (const Word& w : words)
        ASSERT_EQ(t.contains(w), eng.contains(a, w) && eng.contains(b, w))
            << eng.describe(a) << " ∩ " << eng.describe(b) << " at " << F(p, w);
    }
  }
}

// The horizon is a hypothesis about the presentation; compare with a search
// that never prunes.
TEST(Trace, HorizonAgreesWithFullSearch) {
  std::mt19937 rng(5);
  for (auto p : {builtin::S(), builtin::T(), builtin::free2(), builtin::abac()}) {
    IdealEngine eng(p, Ball(p, 5, Window{-1, 1}));
    for (int rep = 0; rep < 40; ++rep) {
      Ideal I = random_ideal(rng, eng, 3);
      EXPECT_EQ(eng.trace(I), eng.search_trace(I, 100)) << eng.describe(I);
    }
  }
}

TEST(Trace, RightClosedAndConsistent) {
  std::mt19937 rng(8);
  for (auto p : {builtin::S(), builtin::T()}) {
    IdealEngine eng(p, Ball(p, 5, Window{-1, 1}));
    auto words = eng.ball().words();
    for (int rep = 0; rep < 20; ++rep) {
      Ideal I = random_ideal(rng, eng, 2);
      const Trace& t = eng.trace(I);
      for (const Word& w : words) {
        bool in = eng.contains(I, w);
        ASSERT_EQ(t.contains(w), in) << eng.describe(I) << " at " << F(p, w);
        if (!in) continue;
        for (const Letter& v : eng.ball().letters()) {
          Word wv = normalize(p, concat(w, Word{v}));
          if (eng.ball().contains(wv)) ASSERT_TRUE(eng.contains(I, wv));
        }
      }
    }
  }
}

TEST(Trace, MeetAndJoinLaws) {
  auto p = builtin::S();
  IdealEngine eng(p, Ball(p, 5, Window{-1, 1}));
  std::mt19937 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    Trace a = eng.trace(random_ideal(rng, eng, 2)), b = eng.trace(random_ideal(rng, eng, 2));
    EXPECT_EQ(meet(a, b), meet(b, a));
    EXPECT_EQ(meet(a, a), a);
    EXPECT_EQ(join(a, b), join(b, a));
    EXPECT_TRUE(meet(a, b).subset_of(a));
    EXPECT_TRUE(a.subset_of(join(a, b)));
    EXPECT_EQ(meet(a, join(a, b)), a);
  }
}

TEST(Operations, PreimageAndTranslateExamples) {
  auto p = builtin::S();
  IdealEngine eng(p, Ball(p, 6, Window{-2, 2}));
  EXPECT_EQ(eng.describe(eng.classify(eng.preimage(W(p, "b")[0], P(p, "Principal(a)")))), "Family(e)");
  EXPECT_EQ(eng.trace(eng.preimage(W(p, "b")[0], P(p, "Principal(a)"))), eng.trace(P(p, "Family(e)")));
  EXPECT_TRUE(eng.trace(eng.preimage(W(p, "a")[0], P(p, "Principal(b a)"))).empty());
  EXPECT_TRUE(eng.trace(eng.preimage(W(p, "a")[0], P(p, "Principal(b b)"))).empty());
  Ideal I = P(p, "Family(a)");
  EXPECT_EQ(eng.translate({}, I), I);
}

TEST(Operations, PreimageUndoesTranslate) {
  std::mt19937 rng(21);
  for (auto p : {builtin::S(), builtin::T()}) {
    IdealEngine eng(p, Ball(p, 5, Window{-1, 1}));
    for (int rep = 0; rep < 30; ++rep) {
      Ideal I = random_ideal(rng, eng, 2);
      for (const Letter& x : eng.ball().letters()) {
        Ideal back = ideal::preimage(x, eng.translate(Word{x}, I));
        ASSERT_EQ(eng.trace(back), eng.trace(I)) << eng.describe(I) << " via " << F(p, Word{x});
      }
    }
  }
}

TEST(Operations, SymbolicPreimageMatchesGeneric) {
  std::mt19937 rng(4);
  auto p = builtin::T();
  IdealEngine eng(p, Ball(p, 5, Window{-1, 1}));
  for (int rep = 0; rep < 40; ++rep) {
    Ideal I = random_ideal(rng, eng, 1);
    for (const Letter& x : eng.ball().letters())
      EXPECT_EQ(eng.trace(eng.preimage(x, I)), eng.trace(ideal::preimage(x, I))) << eng.describe(I);
  }
}

TEST(Closure, SemilatticeLaws) {
  auto p = builtin::S();
  Closure c = semilattice_closure(p, Ball(p, 5, Window{-1, 1}), {500, 1});
  ASSERT_TRUE(c.saturated);
  std::size_t n = c.reps.size();
  int whole = c.find(ideal::whole());
  int empty = c.find(Trace{});
  ASSERT_GE(whole, 0);
  ASSERT_GE(empty, 0);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(c.table[i][i], static_cast<int>(i));
    EXPECT_EQ(c.table[i][whole], static_cast<int>(i));
    EXPECT_EQ(c.table[i][empty], empty);
    for (std::size_t j = 0; j < n; ++j) {
      ASSERT_GE(c.table[i][j], 0);
      EXPECT_EQ(c.table[i][j], c.table[j][i]);
      EXPECT_EQ(c.reps[c.table[i][j]].trace, meet(c.reps[i].trace, c.reps[j].trace));
      for (std::size_t k = 0; k < n; ++k)
        EXPECT_EQ(c.table[c.table[i][j]][k], c.table[i][c.table[j][k]]);
    }
  }
}

TEST(Closure, TracesMatchDescriptions) {
  for (auto p : {builtin::S(), builtin::T()}) {
    Closure c = semilattice_closure(p, Ball(p, 5, Window{-1, 1}), {500, 1});
    IdealEngine fresh(p, c.ball());
    for (const auto& r : c.reps) EXPECT_EQ(fresh.search_trace(r.ideal, 100), r.trace) << c.engine->describe(r.ideal);
  }
}

TEST(Closure, ClosedFormsOnly) {
  for (auto p : {builtin::S(), builtin::T()}) {
    Closure c = semilattice_closure(p, Ball(p, 5, Window{-2, 2}), {500, 1});
    EXPECT_TRUE(c.saturated);
    for (const auto& r : c.reps) EXPECT_NE(shape_of(r.ideal), Shape::opaque) << c.engine->describe(r.ideal);
  }
}

TEST(Closure, FreeMonoidIsPrincipal) {
  auto p = builtin::free2();
  Closure c = semilattice_closure(p, Ball(p, 5, Window{0, 0}), {500, 2});
  ASSERT_TRUE(c.saturated);
  for (std::size_t i = 0; i < c.reps.size(); ++i) {
    Shape s = shape_of(c.reps[i].ideal);
    EXPECT_TRUE(s == Shape::principal || s == Shape::empty) << c.describe(i);
    for (std::size_t j = 0; j < c.reps.size(); ++j) {
      int k = c.table[i][j];
      EXPECT_TRUE(k == static_cast<int>(i) || k == static_cast<int>(j) || c.reps[k].trace.empty());
    }
  }
}

TEST(Closure, BudgetExhaustionIsReported) {
  auto p = builtin::S();
  Closure c = semilattice_closure(p, Ball(p, 5, Window{-1, 1}), {5, 1});
  EXPECT_FALSE(c.saturated);
  EXPECT_EQ(c.reps.size(), 5u);
}

TEST(Closure, IdealsContainingY3) {
  auto p = builtin::S();
  Closure c = semilattice_closure(p, Ball(p, 6, Window{-3, 3}), {500, 1});
  std::set<std::string> got;
  for (int i : ideals_containing(c, {W(p, "y[3]")})) got.insert(c.describe(i));
  EXPECT_EQ(got, (std::set<std::string>{"S", "Principal(y[3])", "Family(e)"}));
}

TEST(Alignment, GrowthInS) {
  auto p = builtin::S();
  for (int w = 1; w <= 3; ++w) {
    IdealEngine eng(p, Ball(p, 4, Window{-w, w}));
    auto e = alignment(eng, W(p, "a"), W(p, "b"));
    EXPECT_EQ(e.generators.size(), static_cast<std::size_t>(2 * (2 * w + 1)));
    for (const auto& g : e.generators) {
      ASSERT_EQ(g.size(), 2u);
      EXPECT_EQ(F(p, Word{g[0]}), "b");
    }
  }
  IdealEngine eng(p, Ball(p, 4, Window{-1, 1}));
  EXPECT_TRUE(alignment(eng, W(p, "x[0]"), W(p, "y[0]")).generators.empty());
}

TEST(Alignment, FreeMonoidCountsAtMostOne) {
  auto p = builtin::free2();
  IdealEngine eng(p, Ball(p, 5, Window{0, 0}));
  for (const auto& e : finite_alignment_report(eng)) EXPECT_LE(e.generators.size(), 1u);
  for (const Word& s : eng.ball().with_radius(2).words())
    for (const Word& t : eng.ball().with_radius(2).words())
      EXPECT_LE(alignment(eng, s, t).generators.size(), 1u);
}
