#include <benchmark/benchmark.h>

#include "arcparse/oracle.h"
#include "support/synthetic.h"

namespace arcparse {
namespace {

std::vector<GoldTree> RandomTrees(int n, int count) {
  Rng rng = MakeRng(42);
  std::vector<GoldTree> trees;
  for (int i = 0; i < count; ++i) {
    trees.push_back(TreeFromHeads(testing::RandomProjectiveHeads(n, rng)));
  }
  return trees;
}

void BM_StandardOracleWalk(benchmark::State& state) {
  const std::vector<GoldTree> trees = RandomTrees(static_cast<int>(state.range(0)), 64);
  std::size_t i = 0;
  for (auto _ : state) {
    const GoldTree& tree = trees[i++ % trees.size()];
    Configuration c = Configuration::Initial(tree);
    while (!IsTerminal(c)) c = Apply(std::move(c), StandardOracle(c, tree));
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * DerivationLength(state.range(0)));
}
BENCHMARK(BM_StandardOracleWalk)->Arg(10)->Arg(30)->Arg(100);

void BM_HybridOracleWalk(benchmark::State& state) {
  const std::vector<GoldTree> trees = RandomTrees(static_cast<int>(state.range(0)), 64);
  Rng rng = MakeRng(7);
  std::size_t i = 0;
  for (auto _ : state) {
    const GoldTree& tree = trees[i++ % trees.size()];
    Configuration c = Configuration::Initial(tree);
    while (!IsTerminal(c)) c = Apply(std::move(c), HybridOracle(c, tree, rng).chosen);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * DerivationLength(state.range(0)));
}
BENCHMARK(BM_HybridOracleWalk)->Arg(10)->Arg(30)->Arg(100);

// Brute-force correct set at the initial configuration, fresh memo each time.
void BM_CorrectSetSearch(benchmark::State& state) {
  const std::vector<GoldTree> trees = RandomTrees(static_cast<int>(state.range(0)), 16);
  std::size_t i = 0;
  for (auto _ : state) {
    const GoldTree& tree = trees[i++ % trees.size()];
    CorrectSetSearch search(tree);
    benchmark::DoNotOptimize(search.CountCompletions(Configuration::Initial(tree)));
  }
}
BENCHMARK(BM_CorrectSetSearch)->Arg(7)->Arg(12)->Arg(20);

}  // namespace
}  // namespace arcparse

BENCHMARK_MAIN();
