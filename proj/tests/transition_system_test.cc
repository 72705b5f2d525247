#include "arcparse/transition_system.h"

#include <functional>
#include <set>

#include <gtest/gtest.h>

#include "support/synthetic.h"

namespace arcparse {
namespace {

Configuration Replay(Configuration c, const std::vector<std::string>& moves) {
  for (const std::string& m : moves) c = Apply(std::move(c), ParseTransition(m));
  return c;
}

TEST(ConfigurationTest, InitialHasRootAtFrontOfBuffer) {
  const Configuration c = Configuration::Initial(3);
  EXPECT_TRUE(c.stack().empty());
  EXPECT_EQ(c.buffer_front(), kRoot);
  EXPECT_EQ(c.buffer_size(), 4);
  EXPECT_TRUE(c.arcs().empty());
  EXPECT_FALSE(c.tracks_gold());
  EXPECT_EQ(c.s0(), -1);
  EXPECT_EQ(c.s1(), -1);
}

TEST(ConfigurationTest, LegalSets) {
  Configuration c = Configuration::Initial(2);
  KindSet only_shift;
  only_shift.insert(TransitionKind::kShift);
  EXPECT_EQ(LegalTransitions(c), only_shift);

  c = Replay(c, {"shift", "shift"});  // [0 1]
  EXPECT_TRUE(LegalTransitions(c).contains(TransitionKind::kRightArc));
  // ROOT never becomes a dependent.
  EXPECT_FALSE(LegalTransitions(c).contains(TransitionKind::kLeftArc));
  EXPECT_TRUE(LegalTransitions(c).contains(TransitionKind::kShift));

  c = Replay(c, {"shift"});  // [0 1 2], buffer empty
  EXPECT_EQ(LegalTransitions(c).size(), 2);
  EXPECT_FALSE(LegalTransitions(c).contains(TransitionKind::kShift));
}

TEST(ConfigurationTest, IllegalTransitionsThrow) {
  const Configuration c = Configuration::Initial(2);
  EXPECT_THROW(Apply(c, Transition::LeftArc("x")), PreconditionError);
  EXPECT_THROW(Apply(c, Transition::RightArc("x")), PreconditionError);
  const Configuration two = Replay(c, {"shift", "shift"});
  EXPECT_THROW(Apply(two, Transition::LeftArc("x")), PreconditionError);
  EXPECT_FALSE(IsLegal(two, Transition::RightArc("")));
  EXPECT_FALSE(IsLegal(two, Transition{TransitionKind::kShift, "x"}));
}

TEST(ConfigurationTest, ApplyBuildsArcsBetweenTopItems) {
  Configuration c = Replay(Configuration::Initial(3), {"shift", "shift", "shift", "larc:a"});
  ASSERT_EQ(c.arcs().size(), 1u);
  EXPECT_EQ(c.arcs()[0], (Arc{2, "a", 1}));
  EXPECT_EQ(c.stack(), (std::vector<int>{0, 2}));
  EXPECT_EQ(c.head_of(1), 2);
  EXPECT_EQ(c.label_of(1), "a");

  c = Replay(c, {"shift", "rarc:b"});
  EXPECT_EQ(c.arcs()[1], (Arc{2, "b", 3}));
  EXPECT_EQ(c.stack(), (std::vector<int>{0, 2}));
  EXPECT_FALSE(IsTerminal(c, 3));
  c = Replay(c, {"rarc:root"});
  EXPECT_TRUE(IsTerminal(c, 3));
  EXPECT_TRUE(IsTerminal(c));
}

TEST(ConfigurationTest, ApplyLeavesSourceUntouched) {
  const Configuration c = Replay(Configuration::Initial(2), {"shift", "shift"});
  const Configuration copy = c;
  const Configuration next = Apply(c, Transition::Shift());
  EXPECT_EQ(c, copy);
  EXPECT_FALSE(next == c);
}

TEST(ConfigurationTest, ZaiWenZhongDerivationsReachGold) {
  const GoldTree tree = testing::ZaiWenZhongTree();
  const std::vector<std::vector<std::string>> derivations = {
      {"shift", "shift", "shift", "larc:case", "shift", "rarc:case", "rarc:root"},
      {"shift", "shift", "shift", "shift", "rarc:case", "larc:case", "rarc:root"},
  };
  for (const auto& moves : derivations) {
    const Configuration c = Replay(Configuration::Initial(tree), moves);
    EXPECT_TRUE(IsTerminal(c));
    EXPECT_TRUE(c.gold_consistent());
    std::set<Arc> arcs(c.arcs().begin(), c.arcs().end());
    EXPECT_EQ(arcs, (std::set<Arc>{{2, "case", 1}, {2, "case", 3}, {0, "root", 2}}));
    EXPECT_EQ(static_cast<int>(moves.size()), DerivationLength(tree.size()));
  }
}

TEST(ConfigurationTest, GoldConsistencyTracksWrongArcs) {
  const GoldTree tree = testing::ZaiWenZhongTree();
  Configuration c = Replay(Configuration::Initial(tree), {"shift", "shift", "shift"});
  // rarc would make 1 the head of 2.
  EXPECT_FALSE(Apply(c, Transition::RightArc("case")).gold_consistent());
  EXPECT_FALSE(Apply(c, Transition::LeftArc("nmod")).gold_consistent());
  EXPECT_TRUE(Apply(c, Transition::LeftArc("case")).gold_consistent());
  c = Replay(c, {"larc:case", "shift"});
  // larc here would make 3 the head of 2.
  EXPECT_FALSE(Replay(c, {"larc:case"}).gold_consistent());
  EXPECT_TRUE(Replay(c, {"rarc:case"}).gold_consistent());
  EXPECT_EQ(c.unattached_left(2), 0);
  EXPECT_EQ(c.unattached_right(2), 1);
}

TEST(TransitionTextTest, RoundTrip) {
  for (const Transition& t : {Transition::Shift(), Transition::LeftArc("nsubj"),
                              Transition::RightArc("dobj")}) {
    EXPECT_EQ(ParseTransition(ToString(t)), t);
  }
  EXPECT_EQ(ToString(Transition::LeftArc("x")), "larc:x");
  EXPECT_THROW(ParseTransition("reduce"), std::invalid_argument);
  EXPECT_THROW(ParseTransition("larc"), std::invalid_argument);
  EXPECT_THROW(ParseTransition("larc:"), std::invalid_argument);
  EXPECT_TRUE(TextualLess(Transition::LeftArc("a"), Transition::RightArc("a")));
  EXPECT_TRUE(TextualLess(Transition::RightArc("a"), Transition::Shift()));
}

// Walks every legal derivation of an unlabeled n-token sentence and checks
// that each token occupies exactly one of stack, buffer or "attached".
void ExhaustInvariants(int n, int& terminals) {
  std::function<void(const Configuration&, int)> walk = [&](const Configuration& c, int depth) {
    std::vector<int> where(n + 1, 0);
    for (int t : c.stack()) ++where[t];
    for (int t = c.buffer_cursor(); t <= n; ++t) ++where[t];
    for (const Arc& arc : c.arcs()) ++where[arc.dependent];
    for (int t = 0; t <= n; ++t) ASSERT_EQ(where[t], 1) << Summary(c);
    ASSERT_EQ(static_cast<int>(c.arcs().size()) + static_cast<int>(c.stack().size()) +
                  c.buffer_size(),
              n + 1);
    const KindSet legal = LegalTransitions(c);
    if (legal.empty()) {
      ASSERT_TRUE(IsTerminal(c, n)) << Summary(c);
      ASSERT_EQ(depth, DerivationLength(n));
      ++terminals;
      return;
    }
    for (int k = 0; k < kNumTransitionKinds; ++k) {
      const auto kind = static_cast<TransitionKind>(k);
      if (!legal.contains(kind)) continue;
      Transition t{kind, kind == TransitionKind::kShift ? "" : "x"};
      walk(Apply(c, t), depth + 1);
    }
  };
  walk(Configuration::Initial(n), 0);
}

TEST(ConfigurationTest, PartitionInvariantAndLengthLawExhaustive) {
  for (int n = 1; n <= 5; ++n) {
    int terminals = 0;
    ExhaustInvariants(n, terminals);
    EXPECT_GT(terminals, 0);
  }
}

TEST(ConfigurationTest, EveryTerminalDerivationYieldsAProjectiveTree) {
  const int n = 4;
  std::set<std::vector<int>> trees;
  std::function<void(const Configuration&)> walk = [&](const Configuration& c) {
    if (IsTerminal(c, n)) {
      std::vector<int> heads(n);
      for (int d = 1; d <= n; ++d) heads[d - 1] = c.head_of(d);
      ASSERT_TRUE(testing::CrossingFree(heads));
      // ROOT may collect several dependents; only single-rooted results are trees.
      if (testing::IsTree(heads)) trees.insert(heads);
      return;
    }
    const KindSet legal = LegalTransitions(c);
    for (int k = 0; k < kNumTransitionKinds; ++k) {
      const auto kind = static_cast<TransitionKind>(k);
      if (!legal.contains(kind)) continue;
      walk(Apply(c, Transition{kind, kind == TransitionKind::kShift ? "" : "x"}));
    }
  };
  walk(Configuration::Initial(n));
  const std::vector<std::vector<int>> all = testing::AllProjectiveHeadArrays(n);
  EXPECT_EQ(trees, std::set<std::vector<int>>(all.begin(), all.end()));
}

}  // namespace
}  // namespace arcparse
