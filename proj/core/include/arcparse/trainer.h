#ifndef ARCPARSE_TRAINER_H_
#define ARCPARSE_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arcparse/adam.h"
#include "arcparse/evaluator.h"
#include "arcparse/model.h"
#include "arcparse/network.h"
#include "arcparse/oracle.h"
#include "arcparse/rng.h"
#include "arcparse/treebank.h"
#include "arcparse/vocab.h"

namespace arcparse {

enum class OracleKind { kStandard, kHybrid };

std::string_view OracleKindName(OracleKind kind);
OracleKind ParseOracleKind(std::string_view name);

struct TrainConfig {
  OracleKind oracle = OracleKind::kHybrid;
  // Follow a random member of the correct set instead of the static path.
  bool explore = false;
  // Probability of following shift at a shift/larc ambiguity.
  double p_shift = 0.5;
  int epochs = 20;
  std::uint64_t seed = 1;
  double dropout = 0.5;
  // Words seen fewer than twice in training are replaced by UNK with this
  // probability per occurrence.
  double word_dropout = 0.5;
  ModelDims dims;
  AdamConfig adam;
  // Workers for dev-set decoding between epochs.
  int threads = 1;

  // Throws std::invalid_argument: epochs < 1, p_shift or dropout outside
  // [0, 1], explore without the hybrid oracle.
  void Validate() const;
};

// One oracle-driven step: where the classifier looked and what it was taught.
struct StepRecord {
  SlotFeatures features;
  std::vector<Transition> correct_set;
  Transition applied;
};

// Called for every oracle query, before the chosen transition is applied.
using StepObserver =
    std::function<void(const GoldTree&, const Configuration&, const OracleOutcome&)>;

// Walks the configured oracle from the initial configuration to the gold
// tree. Standard: larc-first static path, one-hot targets. Hybrid: the full
// correct set as targets; with `explore` the applied transition is drawn from
// it, otherwise the static path is followed. Requires a projective tree.
std::vector<StepRecord> OraclePath(const GoldTree& tree, const TrainConfig& config, Rng& rng,
                                   const StepObserver& observer = nullptr);

// Trains on one sentence: sums the transition losses (uniform target over
// the correct set) and, at arc steps, the one-hot label losses, then takes a
// single Adam step. Returns the summed loss.
double TrainSentence(const GoldTree& tree, const Vocab& vocab, ModelParams& params,
                     AdamState& adam, const TrainConfig& config, Rng& rng,
                     const StepObserver& observer = nullptr);

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;  // mean summed loss per training sentence
  double dev_uas = 0.0;
  double dev_las = 0.0;
  double dev_uem = 0.0;
  double wall_seconds = 0.0;
};

std::string MetricsJsonLine(const EpochMetrics& metrics);

// Resumes training from a previous run's final state.
struct TrainState {
  ModelParams params;
  AdamState adam;
  Vocab vocab;
  int epochs_completed = 0;
};

struct TrainHooks {
  std::function<void(const EpochMetrics&)> on_epoch;
  StepObserver on_step;
  const PunctSet* dev_punct = nullptr;  // default: no exclusion
  std::optional<TrainState> resume;
};

struct TrainResult {
  Vocab vocab;
  ModelParams best_params;
  int best_epoch = 0;
  // State after the last epoch, for resuming.
  TrainState final_state;
  std::vector<EpochMetrics> epochs;
  int skipped_nonprojective = 0;
};

// Epoch loop: sentences shuffled per epoch with a stream derived from
// (seed, epoch), one Adam step per sentence, greedy dev decoding after each
// epoch. Returns the parameters of the epoch with the best dev UAS (earliest
// on ties). Non-projective training sentences are skipped and counted.
TrainResult Train(std::span<const GoldTree> train, std::span<const GoldTree> dev,
                  const TrainConfig& config, TrainHooks hooks = {});

}  // namespace arcparse

#endif  // ARCPARSE_TRAINER_H_
