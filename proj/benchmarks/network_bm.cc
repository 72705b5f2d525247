#include <benchmark/benchmark.h>

#include "arcparse/evaluator.h"
#include "arcparse/network.h"
#include "arcparse/oracle.h"
#include "support/synthetic.h"

namespace arcparse {
namespace {

struct Fixture {
  std::vector<GoldTree> trees;
  Vocab vocab;
  ModelParams params;

  explicit Fixture(const ModelDims& dims) : trees(testing::ToyTreebank(64, 3)) {
    vocab = Vocab::Build(trees);
    Rng rng = MakeRng(1);
    params = InitModel(dims, VocabSizes{vocab.num_words(), vocab.num_pos(), vocab.num_labels()},
                       rng);
  }
};

ModelDims DimsFor(const benchmark::State& state) {
  ModelDims dims;
  dims.lstm_dim = static_cast<int>(state.range(0));
  dims.hidden_dim = static_cast<int>(state.range(0));
  return dims;
}

// One sentence: BiLSTM forward, a loss per standard-oracle step, backward.
void BM_SentenceForwardBackward(benchmark::State& state) {
  const Fixture f(DimsFor(state));
  ModelParams grads = ModelParams::Zeros(f.params.dims, f.params.sizes);
  Rng rng = MakeRng(2);
  std::size_t i = 0;
  std::int64_t tokens = 0;
  for (auto _ : state) {
    const GoldTree& tree = f.trees[i++ % f.trees.size()];
    SentenceGraph<float> graph(f.params, LookupIds(tree, f.vocab), 0.3, &rng);
    Configuration c = Configuration::Initial(tree);
    while (!IsTerminal(c)) {
      const Transition t = StandardOracle(c, tree);
      graph.AddLoss(Head::kTransition, FeaturesOf(c),
                    TargetDistribution::OneHot(3, static_cast<int>(t.kind)));
      c = Apply(std::move(c), t);
    }
    graph.Backward(grads);
    tokens += tree.size();
  }
  state.counters["tokens/s"] = benchmark::Counter(static_cast<double>(tokens),
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SentenceForwardBackward)->Arg(32)->Arg(100)->Arg(200);

void BM_GreedyDecode(benchmark::State& state) {
  const Fixture f(DimsFor(state));
  std::size_t i = 0;
  std::int64_t tokens = 0;
  for (auto _ : state) {
    const GoldTree& tree = f.trees[i++ % f.trees.size()];
    benchmark::DoNotOptimize(GreedyDecode(tree, f.vocab, f.params));
    tokens += tree.size();
  }
  state.counters["tokens/s"] = benchmark::Counter(static_cast<double>(tokens),
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(BM_GreedyDecode)->Arg(32)->Arg(100)->Arg(200);

}  // namespace
}  // namespace arcparse

BENCHMARK_MAIN();
