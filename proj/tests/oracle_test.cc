#include "arcparse/oracle.h"

#include <algorithm>
#include <functional>
#include <set>

#include <gtest/gtest.h>

#include "support/synthetic.h"

namespace arcparse {
namespace {

std::vector<std::string> Sorted(const std::vector<Transition>& ts) {
  std::vector<std::string> out;
  for (const Transition& t : ts) out.push_back(ToString(t));
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t Binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

TEST(StandardOracleTest, ZaiWenZhongPrefersLeftArc) {
  const GoldTree tree = testing::ZaiWenZhongTree();
  Configuration c = Configuration::Initial(tree);
  std::vector<Transition> path;
  while (!IsTerminal(c)) {
    path.push_back(StandardOracle(c, tree));
    c = Apply(std::move(c), path.back());
  }
  EXPECT_EQ(ToString(path), "shift shift shift larc:case shift rarc:case rarc:root");
}

TEST(HybridOracleTest, ZaiWenZhongAmbiguityPoint) {
  const GoldTree tree = testing::ZaiWenZhongTree();
  Configuration c = Configuration::Initial(tree);
  for (int i = 0; i < 3; ++i) c = Apply(std::move(c), Transition::Shift());
  Rng rng = MakeRng(5);
  const OracleOutcome outcome = HybridOracle(c, tree, rng);
  EXPECT_TRUE(outcome.ambiguous());
  EXPECT_EQ(Sorted(outcome.correct_set),
            (std::vector<std::string>{"larc:case", "shift"}));
}

TEST(HybridOracleTest, PShiftExtremesAreDeterministic) {
  const GoldTree tree = testing::ZaiWenZhongTree();
  Configuration c = Configuration::Initial(tree);
  for (int i = 0; i < 3; ++i) c = Apply(std::move(c), Transition::Shift());
  Rng rng = MakeRng(9);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(HybridOracle(c, tree, rng, 1.0).chosen, Transition::Shift());
    EXPECT_EQ(HybridOracle(c, tree, rng, 0.0).chosen, Transition::LeftArc("case"));
  }
}

TEST(HybridOracleTest, CoinIsRoughlyFair) {
  const GoldTree tree = testing::ZaiWenZhongTree();
  Configuration c = Configuration::Initial(tree);
  for (int i = 0; i < 3; ++i) c = Apply(std::move(c), Transition::Shift());
  Rng rng = MakeRng(13);
  int shifts = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    if (HybridOracle(c, tree, rng).chosen == Transition::Shift()) ++shifts;
  }
  EXPECT_NEAR(static_cast<double>(shifts) / trials, 0.5, 0.02);
}

TEST(HybridOracleTest, OffGoldConfigurationIsAnError) {
  const GoldTree tree = testing::ZaiWenZhongTree();
  Configuration c = Configuration::Initial(tree);
  for (int i = 0; i < 3; ++i) c = Apply(std::move(c), Transition::Shift());
  c = Apply(std::move(c), Transition::RightArc("case"));
  Rng rng = MakeRng(1);
  EXPECT_THROW(HybridOracle(c, tree, rng), OracleError);
  EXPECT_THROW(StandardOracle(c, tree), OracleError);
  EXPECT_TRUE(CorrectSetBruteForce(c, tree).empty());
  EXPECT_THROW(StandardOracle(Configuration::Initial(3), tree), OracleError);
}

// Visits every configuration reachable through correct transitions.
void ForEachCorrectConfiguration(const GoldTree& tree,
                                 const std::function<void(const Configuration&)>& visit) {
  CorrectSetSearch search(tree);
  std::function<void(const Configuration&)> walk = [&](const Configuration& c) {
    visit(c);
    for (const Transition& t : search.CorrectSet(c)) walk(Apply(c, t));
  };
  walk(Configuration::Initial(tree));
}

TEST(HybridOracleTest, MatchesBruteForceExhaustivelyUpToFive) {
  // The acceptance binary runs the same check for n <= 7.
  Rng rng = MakeRng(3);
  for (int n = 1; n <= 5; ++n) {
    for (const std::vector<int>& heads : testing::AllProjectiveHeadArrays(n)) {
      const GoldTree tree = TreeFromHeads(heads);
      ForEachCorrectConfiguration(tree, [&](const Configuration& c) {
        if (IsTerminal(c)) return;
        const OracleOutcome outcome = HybridOracle(c, tree, rng);
        ASSERT_EQ(Sorted(outcome.correct_set), Sorted(CorrectSetBruteForce(c, tree)))
            << Summary(c);
        ASSERT_NE(std::find(outcome.correct_set.begin(), outcome.correct_set.end(),
                            outcome.chosen),
                  outcome.correct_set.end());
        const Transition standard = StandardOracle(c, tree);
        ASSERT_NE(std::find(outcome.correct_set.begin(), outcome.correct_set.end(), standard),
                  outcome.correct_set.end());
      });
    }
  }
}

TEST(HybridOracleTest, AmbiguityOnlyAtHeadsWithPendingRightDependents) {
  Rng rng = MakeRng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const GoldTree tree = TreeFromHeads(testing::RandomProjectiveHeads(10, rng));
    Configuration c = Configuration::Initial(tree);
    while (!IsTerminal(c)) {
      const OracleOutcome outcome = HybridOracle(c, tree, rng);
      const bool expected = c.stack().size() >= 2 && c.s1() != kRoot &&
                            tree.head(c.s1()) == c.s0() && c.unattached_right(c.s0()) > 0;
      ASSERT_EQ(outcome.ambiguous(), expected);
      c = Apply(std::move(c), outcome.chosen);
    }
  }
}

TEST(HybridOracleTest, RandomWalksComplete) {
  Rng rng = MakeRng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(UniformDraw(rng) * 15);
    const GoldTree tree = TreeFromHeads(testing::RandomProjectiveHeads(n, rng));
    Configuration c = Configuration::Initial(tree);
    int steps = 0;
    while (!IsTerminal(c)) {
      c = Apply(std::move(c), HybridOracle(c, tree, rng).chosen);
      ++steps;
    }
    ASSERT_EQ(steps, DerivationLength(n));
    for (int d = 1; d <= n; ++d) {
      ASSERT_EQ(c.head_of(d), tree.head(d));
      ASSERT_EQ(c.label_of(d), tree.label(d));
    }
  }
}

TEST(HybridOracleTest, SameSeedSameWalk) {
  const GoldTree tree = testing::FlatTree(3, 3);
  auto walk = [&](std::uint64_t seed) {
    Rng rng = MakeRng(seed);
    Configuration c = Configuration::Initial(tree);
    std::vector<Transition> path;
    while (!IsTerminal(c)) {
      path.push_back(HybridOracle(c, tree, rng).chosen);
      c = Apply(std::move(c), path.back());
    }
    return ToString(path);
  };
  EXPECT_EQ(walk(4), walk(4));
  std::set<std::string> distinct;
  for (std::uint64_t seed = 0; seed < 64; ++seed) distinct.insert(walk(seed));
  EXPECT_GT(distinct.size(), 1u);
}

TEST(EnumerateTest, ZaiWenZhong) {
  const Enumeration e = EnumerateSequences(testing::ZaiWenZhongTree(), 64);
  EXPECT_EQ(e.count, 2u);
  EXPECT_FALSE(e.truncated);
  ASSERT_EQ(e.sequences.size(), 2u);
  std::vector<std::string> cores;
  for (const auto& seq : e.sequences) {
    std::string core;
    for (const Transition& t : WordLevelCore(seq)) {
      if (!core.empty()) core += ' ';
      core += std::string(KindName(t.kind));
    }
    cores.push_back(core);
  }
  std::sort(cores.begin(), cores.end());
  EXPECT_EQ(cores, (std::vector<std::string>{"shift shift larc shift rarc",
                                             "shift shift shift rarc larc"}));
}

TEST(EnumerateTest, FlatTreeCountLaw) {
  for (int left = 0; left <= 4; ++left) {
    for (int right = 0; right <= 4; ++right) {
      if (left + right == 0) continue;
      const Enumeration e = EnumerateSequences(testing::FlatTree(left, right), 1000);
      EXPECT_EQ(e.count, Binomial(left + right, left)) << left << "/" << right;
      EXPECT_EQ(e.sequences.size(), e.count);
    }
  }
}

TEST(EnumerateTest, ChainsHaveOneDerivation) {
  EXPECT_EQ(EnumerateSequences(testing::LeftChain(6), 10).count, 1u);
  EXPECT_EQ(EnumerateSequences(TreeFromHeads(std::vector<int>{0, 1, 2, 3}), 10).count, 1u);
}

TEST(EnumerateTest, SequencesAreDistinctSortedAndCorrect) {
  Rng rng = MakeRng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const GoldTree tree = TreeFromHeads(testing::RandomProjectiveHeads(8, rng));
    const Enumeration e = EnumerateSequences(tree, 100000);
    ASSERT_EQ(e.sequences.size(), e.count);
    std::vector<std::string> texts;
    for (const auto& seq : e.sequences) {
      Configuration c = Configuration::Initial(tree);
      for (const Transition& t : seq) c = Apply(std::move(c), t);
      ASSERT_TRUE(IsTerminal(c));
      ASSERT_TRUE(c.gold_consistent());
      texts.push_back(ToString(seq));
    }
    ASSERT_TRUE(std::is_sorted(texts.begin(), texts.end()));
    ASSERT_EQ(std::adjacent_find(texts.begin(), texts.end()), texts.end());
  }
}

TEST(EnumerateTest, LimitTruncatesListingButNotCount) {
  const Enumeration e = EnumerateSequences(testing::FlatTree(4, 4), 5);
  EXPECT_EQ(e.count, 70u);
  EXPECT_TRUE(e.truncated);
  EXPECT_EQ(e.sequences.size(), 5u);
}

TEST(EnumerateTest, NonProjectiveRejected) {
  const GoldTree tree = TreeFromHeads(std::vector<int>{3, 0, 2});
  EXPECT_FALSE(tree.projective);
  EXPECT_THROW(EnumerateSequences(tree, 10), std::invalid_argument);
}

TEST(CorrectSetSearchTest, CountsMatchEnumerationUnderAmbiguity) {
  const GoldTree tree = TreeFromHeads(std::vector<int>{2, 0, 4, 2, 2});
  CorrectSetSearch search(tree);
  const std::uint64_t count = search.CountCompletions(Configuration::Initial(tree));
  EXPECT_EQ(count, EnumerateSequences(tree, 1000).sequences.size());
  EXPECT_GT(search.memo_size(), 0u);
}

}  // namespace
}  // namespace arcparse
