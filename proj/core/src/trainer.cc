#include "arcparse/trainer.h"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "arcparse/network.h"

namespace arcparse {
namespace {

SentenceInput DropRareWords(const GoldTree& tree, const Vocab& vocab, double rate, Rng& rng) {
  SentenceInput input = LookupIds(tree, vocab);
  if (rate <= 0.0) return input;
  for (int& id : input.words) {
    if (id != Vocab::kUnk && vocab.WordCount(id) < 2 && UniformDraw(rng) < rate) {
      id = Vocab::kUnk;
    }
  }
  return input;
}

double TrainSentenceWith(const GoldTree& tree, const Vocab& vocab, ModelParams& params,
                         AdamState& adam, ModelParams& grads, const TrainConfig& config,
                         Rng& rng, const StepObserver& observer) {
  const SentenceInput input = DropRareWords(tree, vocab, config.word_dropout, rng);
  SentenceGraph<float> graph(params, input, config.dropout, &rng);
  for (const StepRecord& step : OraclePath(tree, config, rng, observer)) {
    std::vector<int> support;
    for (const Transition& t : step.correct_set) support.push_back(static_cast<int>(t.kind));
    graph.AddLoss(Head::kTransition, step.features,
                  TargetDistribution::Uniform(kNumTransitionKinds, support));
    if (step.applied.is_arc()) {
      const int label = vocab.LabelId(step.applied.label);
      if (label >= 0) {
        graph.AddLoss(Head::kLabel, step.features,
                      TargetDistribution::OneHot(vocab.num_labels(), label));
      }
    }
  }
  grads.ForEachBlock([](std::string_view, MatrixX<float>& g) { g.setZero(); });
  graph.Backward(grads);
  AdamStep(params, grads, adam, config.adam);
  return graph.total_loss();
}

}  // namespace

std::string_view OracleKindName(OracleKind kind) {
  return kind == OracleKind::kStandard ? "standard" : "hybrid";
}

OracleKind ParseOracleKind(std::string_view name) {
  if (name == "standard") return OracleKind::kStandard;
  if (name == "hybrid") return OracleKind::kHybrid;
  throw std::invalid_argument("unknown oracle '" + std::string(name) +
                              "' (expected standard or hybrid)");
}

void TrainConfig::Validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (!(p_shift >= 0.0 && p_shift <= 1.0)) {
    throw std::invalid_argument("p_shift must lie in [0, 1]");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("dropout must lie in [0, 1)");
  }
  if (!(word_dropout >= 0.0 && word_dropout <= 1.0)) {
    throw std::invalid_argument("word dropout must lie in [0, 1]");
  }
  if (explore && oracle != OracleKind::kHybrid) {
    throw std::invalid_argument("exploration requires the hybrid oracle");
  }
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

std::vector<StepRecord> OraclePath(const GoldTree& tree, const TrainConfig& config, Rng& rng,
                                   const StepObserver& observer) {
  if (!tree.annotated || !tree.projective) {
    throw std::invalid_argument("sentence '" + tree.id + "' is not projective");
  }
  std::vector<StepRecord> path;
  path.reserve(DerivationLength(tree.size()));
  Configuration c = Configuration::Initial(tree);
  while (!IsTerminal(c)) {
    OracleOutcome outcome;
    if (config.oracle == OracleKind::kStandard) {
      Transition t = StandardOracle(c, tree);
      outcome.correct_set = {t};
      outcome.chosen = std::move(t);
    } else {
      outcome = HybridOracle(c, tree, rng, config.p_shift);
      if (!config.explore) outcome.chosen = StandardOracle(c, tree);
    }
    if (observer) observer(tree, c, outcome);
    path.push_back(StepRecord{FeaturesOf(c), outcome.correct_set, outcome.chosen});
    c = Apply(std::move(c), outcome.chosen);
  }
  return path;
}

double TrainSentence(const GoldTree& tree, const Vocab& vocab, ModelParams& params,
                     AdamState& adam, const TrainConfig& config, Rng& rng,
                     const StepObserver& observer) {
  ModelParams grads = params.ZerosLike();
  return TrainSentenceWith(tree, vocab, params, adam, grads, config, rng, observer);
}

std::string MetricsJsonLine(const EpochMetrics& metrics) {
  nlohmann::ordered_json json;
  json["epoch"] = metrics.epoch;
  json["train_loss"] = metrics.train_loss;
  json["dev_uas"] = metrics.dev_uas;
  json["dev_las"] = metrics.dev_las;
  json["dev_uem"] = metrics.dev_uem;
  json["wall_seconds"] = metrics.wall_seconds;
  return json.dump();
}

TrainResult Train(std::span<const GoldTree> train, std::span<const GoldTree> dev,
                  const TrainConfig& config, TrainHooks hooks) {
  config.Validate();
  TrainResult result;

  std::vector<const GoldTree*> usable;
  for (const GoldTree& tree : train) {
    if (tree.annotated && tree.projective) {
      usable.push_back(&tree);
    } else {
      ++result.skipped_nonprojective;
    }
  }
  if (usable.empty()) throw std::invalid_argument("no projective training sentences");

  ModelParams params;
  AdamState adam;
  int first_epoch = 1;
  if (hooks.resume) {
    result.vocab = std::move(hooks.resume->vocab);
    params = std::move(hooks.resume->params);
    adam = std::move(hooks.resume->adam);
    first_epoch = hooks.resume->epochs_completed + 1;
    hooks.resume.reset();
  } else {
    result.vocab = Vocab::Build(train);
    Rng init_rng = MakeRng(config.seed, 0);
    params = InitModel(config.dims,
                       VocabSizes{result.vocab.num_words(), result.vocab.num_pos(),
                                  result.vocab.num_labels()},
                       init_rng);
    adam = AdamState::For(params);
  }
  const Vocab& vocab = result.vocab;
  const PunctSet no_punct;
  const PunctSet& punct = hooks.dev_punct != nullptr ? *hooks.dev_punct : no_punct;

  ModelParams grads = params.ZerosLike();
  std::vector<std::size_t> order(usable.size());
  double best_uas = -1.0;
  for (int epoch = first_epoch; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng = MakeRng(config.seed, static_cast<std::uint64_t>(epoch));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    double loss = 0.0;
    for (std::size_t i : order) {
      loss += TrainSentenceWith(*usable[i], vocab, params, adam, grads, config, rng,
                                hooks.on_step);
    }

    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.train_loss = loss / static_cast<double>(usable.size());
    if (!dev.empty()) {
      const std::vector<Parse> parses = DecodeAll(dev, vocab, params, config.threads);
      const EvalReport report = Evaluate(dev, parses, punct);
      metrics.dev_uas = report.uas;
      metrics.dev_las = report.las;
      metrics.dev_uem = report.uem;
    }
    metrics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.epochs.push_back(metrics);
    if (hooks.on_epoch) hooks.on_epoch(metrics);

    if (metrics.dev_uas > best_uas) {
      best_uas = metrics.dev_uas;
      result.best_epoch = epoch;
      result.best_params = params;
    }
  }
  if (result.epochs.empty()) {
    throw std::invalid_argument("nothing to train: model already has " +
                                std::to_string(first_epoch - 1) + " epochs, target is " +
                                std::to_string(config.epochs));
  }
  result.final_state = TrainState{std::move(params), std::move(adam), result.vocab,
                                  config.epochs};
  return result;
}

}  // namespace arcparse
