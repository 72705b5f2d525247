#ifndef ARCPARSE_NETWORK_H_
#define ARCPARSE_NETWORK_H_

#include <vector>

#include "arcparse/loss.h"
#include "arcparse/model.h"
#include "arcparse/rng.h"
#include "arcparse/transition_system.h"
#include "arcparse/treebank.h"
#include "arcparse/vocab.h"

namespace arcparse {

// Word and POS ids of tokens 1..n.
struct SentenceInput {
  std::vector<int> words;
  std::vector<int> pos;

  int size() const { return static_cast<int>(words.size()); }
};

SentenceInput LookupIds(const GoldTree& sentence, const Vocab& vocab);

// Columns of the context matrix read by the classifier. Column 0 holds ROOT,
// columns 1..n the tokens and column n + 1 the pad vector for empty slots.
struct SlotFeatures {
  int s1 = 0;
  int s0 = 0;
  int b0 = 0;
};

SlotFeatures FeaturesOf(const Configuration& c);

enum class Head { kTransition = 0, kLabel = 1 };

// Forward computation for one sentence plus the tape needed to
// back-propagate any number of classifier losses through it.
//
// The BiLSTM runs once over [word_emb; pos_emb] inputs. With a dropout rate
// and an Rng, inverted dropout is applied to the BiLSTM output. The first
// layer of each head is linear in the three slot vectors, so its projections
// of every context column are computed up front and each step only sums
// three columns.
template <typename T>
class SentenceGraph {
 public:
  struct Scores {
    VectorX<T> transition;  // over {shift, larc, rarc}
    VectorX<T> label;       // over the relation inventory
  };

  SentenceGraph(const BasicModelParams<T>& params, const SentenceInput& input,
                double dropout_rate = 0.0, Rng* rng = nullptr);

  int sentence_length() const { return n_; }
  // 2h x (n + 2) context matrix (ROOT, tokens, pad).
  const MatrixX<T>& context() const { return context_; }

  // Softmax distributions of both heads. Does not touch the tape.
  Scores Score(const SlotFeatures& f) const;
  VectorX<T> Probabilities(Head head, const SlotFeatures& f) const;

  // Records -sum target * log p for the given head and returns its value.
  double AddLoss(Head head, const SlotFeatures& f, const TargetDistribution& target);
  double total_loss() const { return total_loss_; }
  int num_losses() const { return static_cast<int>(terms_.size()); }

  // Adds d(total_loss)/d(params) into `grads`, which must have the shapes of
  // the parameters the graph was built from.
  void Backward(BasicModelParams<T>& grads) const;

 private:
  struct Direction {
    // Processing order of token columns (0-based).
    std::vector<int> order;
    MatrixX<T> gates;       // 4h x n activated [i; f; g; o], token columns
    MatrixX<T> cells;       // h x n
    MatrixX<T> tanh_cells;  // h x n
    MatrixX<T> prev_hidden; // h x n, hidden state fed into each step
    MatrixX<T> prev_cells;  // h x n
    MatrixX<T> hidden;      // h x n
  };

  struct Term {
    Head head;
    SlotFeatures slots;
    VectorX<T> hidden;
    VectorX<T> probs;
    VectorX<T> target;
  };

  void RunDirection(const LstmWeights<T>& w, Direction& dir) const;
  void BackwardDirection(const LstmWeights<T>& w, const Direction& dir,
                         const MatrixX<T>& d_hidden, LstmWeights<T>& grads,
                         MatrixX<T>& d_inputs) const;
  const HeadWeights<T>& weights(Head head) const;
  void HiddenAndProbs(Head head, const SlotFeatures& f, VectorX<T>& hidden,
                      VectorX<T>& probs) const;

  const BasicModelParams<T>& params_;
  SentenceInput input_;
  int n_ = 0;
  MatrixX<T> inputs_;  // input_dim x n
  Direction forward_;
  Direction backward_;
  MatrixX<T> dropout_mask_;  // 2h x n, empty when dropout is off
  MatrixX<T> context_;
  // projections_[head][slot] = W_hidden(slot block) * context, hidden x (n+2)
  MatrixX<T> projections_[2][ModelDims::kFeatureSlots];
  std::vector<Term> terms_;
  double total_loss_ = 0.0;
};

// Context vectors of ROOT and tokens 1..n (2h x (n + 1)).
MatrixX<float> Encode(const ModelParams& params, const SentenceInput& input,
                      bool train_mode = false, Rng* rng = nullptr,
                      double dropout_rate = 0.5);

extern template class SentenceGraph<float>;
extern template class SentenceGraph<double>;

}  // namespace arcparse

#endif  // ARCPARSE_NETWORK_H_
