#ifndef ARCPARSE_MODEL_H_
#define ARCPARSE_MODEL_H_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "arcparse/rng.h"

namespace arcparse {

// Layer sizes. Defaults: 50-d word and POS embeddings, a one-layer BiLSTM
// with 200 units per direction and 200 hidden units in each feed-forward
// head.
struct ModelDims {
  int word_dim = 50;
  int pos_dim = 50;
  int lstm_dim = 200;
  int hidden_dim = 200;

  int input_dim() const { return word_dim + pos_dim; }
  int context_dim() const { return 2 * lstm_dim; }
  // The classifier reads s1, s0 and b0.
  static constexpr int kFeatureSlots = 3;
  int feature_dim() const { return kFeatureSlots * context_dim(); }

  bool operator==(const ModelDims&) const = default;
};

struct VocabSizes {
  int words = 1;
  int pos = 1;
  int labels = 1;

  bool operator==(const VocabSizes&) const = default;
};

template <typename T>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// LSTM weights with gate blocks stacked as [input; forget; cell; output].
template <typename T>
struct LstmWeights {
  MatrixX<T> wx;  // 4h x input
  MatrixX<T> wh;  // 4h x h
  MatrixX<T> b;   // 4h x 1
};

// relu(W [e_s1; e_s0; e_b0] + b) followed by a softmax output layer.
template <typename T>
struct HeadWeights {
  MatrixX<T> w_hidden;  // hidden x 3*2h
  MatrixX<T> b_hidden;  // hidden x 1
  MatrixX<T> w_out;     // classes x hidden
  MatrixX<T> b_out;     // classes x 1
};

// All trainable blocks. Every block is a matrix so that optimizers,
// serialization and gradient checks can treat them uniformly.
template <typename T>
struct BasicModelParams {
  ModelDims dims;
  VocabSizes sizes;

  MatrixX<T> word_emb;  // word_dim x |words|, one column per word
  MatrixX<T> pos_emb;   // pos_dim x |pos|
  LstmWeights<T> forward;
  LstmWeights<T> backward;
  MatrixX<T> root;      // 2h x 1, context vector of ROOT
  MatrixX<T> pad;       // 2h x 1, context vector of an empty slot
  HeadWeights<T> transition;  // 3 classes: shift, larc, rarc
  HeadWeights<T> label;       // |labels| classes

  // Allocates zero-filled blocks of the right shapes.
  static BasicModelParams Zeros(const ModelDims& dims, const VocabSizes& sizes);

  BasicModelParams ZerosLike() const { return Zeros(dims, sizes); }

  template <typename F>
  void ForEachBlock(F&& f) {
    f("word_emb", word_emb);
    f("pos_emb", pos_emb);
    f("lstm_fwd.wx", forward.wx);
    f("lstm_fwd.wh", forward.wh);
    f("lstm_fwd.b", forward.b);
    f("lstm_bwd.wx", backward.wx);
    f("lstm_bwd.wh", backward.wh);
    f("lstm_bwd.b", backward.b);
    f("root", root);
    f("pad", pad);
    f("trans.w_hidden", transition.w_hidden);
    f("trans.b_hidden", transition.b_hidden);
    f("trans.w_out", transition.w_out);
    f("trans.b_out", transition.b_out);
    f("label.w_hidden", label.w_hidden);
    f("label.b_hidden", label.b_hidden);
    f("label.w_out", label.w_out);
    f("label.b_out", label.b_out);
  }

  template <typename F>
  void ForEachBlock(F&& f) const {
    const_cast<BasicModelParams*>(this)->ForEachBlock(
        [&](std::string_view name, const MatrixX<T>& block) { f(name, block); });
  }

  // Applies f(name, a_block, b_block) to matching blocks of two parameter sets.
  template <typename U, typename F>
  void ZipBlocks(BasicModelParams<U>& other, F&& f) {
    std::vector<MatrixX<U>*> theirs;
    other.ForEachBlock([&](std::string_view, MatrixX<U>& block) { theirs.push_back(&block); });
    std::size_t i = 0;
    ForEachBlock([&](std::string_view name, MatrixX<T>& block) { f(name, block, *theirs[i++]); });
  }

  template <typename U>
  BasicModelParams<U> Cast() const {
    BasicModelParams<U> out = BasicModelParams<U>::Zeros(dims, sizes);
    const_cast<BasicModelParams*>(this)->ZipBlocks(
        out, [](std::string_view, MatrixX<T>& mine, MatrixX<U>& theirs) {
          theirs = mine.template cast<U>();
        });
    return out;
  }

  std::size_t ParameterCount() const;
  bool AllFinite() const;
  bool operator==(const BasicModelParams& other) const;
};

using ModelParams = BasicModelParams<float>;

// Embeddings, ROOT and pad vectors ~ U(-0.1, 0.1); dense weights
// Xavier-uniform; biases zero except the LSTM forget gates, which start at 1.
ModelParams InitModel(const ModelDims& dims, const VocabSizes& sizes, Rng& rng);

}  // namespace arcparse

#endif  // ARCPARSE_MODEL_H_
