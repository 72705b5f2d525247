#include "arcparse/model.h"

#include <cmath>

namespace arcparse {
namespace {

template <typename T>
LstmWeights<T> ZeroLstm(int input, int hidden) {
  return {MatrixX<T>::Zero(4 * hidden, input), MatrixX<T>::Zero(4 * hidden, hidden),
          MatrixX<T>::Zero(4 * hidden, 1)};
}

template <typename T>
HeadWeights<T> ZeroHead(int input, int hidden, int classes) {
  return {MatrixX<T>::Zero(hidden, input), MatrixX<T>::Zero(hidden, 1),
          MatrixX<T>::Zero(classes, hidden), MatrixX<T>::Zero(classes, 1)};
}

void FillUniform(MatrixX<float>& m, Rng& rng, double limit) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, j) = static_cast<float>(UniformDraw(rng, -limit, limit));
    }
  }
}

void FillXavier(MatrixX<float>& m, Rng& rng) {
  FillUniform(m, rng, std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols())));
}

}  // namespace

template <typename T>
BasicModelParams<T> BasicModelParams<T>::Zeros(const ModelDims& dims, const VocabSizes& sizes) {
  BasicModelParams p;
  p.dims = dims;
  p.sizes = sizes;
  p.word_emb = MatrixX<T>::Zero(dims.word_dim, sizes.words);
  p.pos_emb = MatrixX<T>::Zero(dims.pos_dim, sizes.pos);
  p.forward = ZeroLstm<T>(dims.input_dim(), dims.lstm_dim);
  p.backward = ZeroLstm<T>(dims.input_dim(), dims.lstm_dim);
  p.root = MatrixX<T>::Zero(dims.context_dim(), 1);
  p.pad = MatrixX<T>::Zero(dims.context_dim(), 1);
  p.transition = ZeroHead<T>(dims.feature_dim(), dims.hidden_dim, 3);
  p.label = ZeroHead<T>(dims.feature_dim(), dims.hidden_dim, sizes.labels);
  return p;
}

template <typename T>
std::size_t BasicModelParams<T>::ParameterCount() const {
  std::size_t count = 0;
  ForEachBlock([&](std::string_view, const MatrixX<T>& block) {
    count += static_cast<std::size_t>(block.size());
  });
  return count;
}

template <typename T>
bool BasicModelParams<T>::AllFinite() const {
  bool finite = true;
  ForEachBlock([&](std::string_view, const MatrixX<T>& block) {
    finite = finite && block.allFinite();
  });
  return finite;
}

template <typename T>
bool BasicModelParams<T>::operator==(const BasicModelParams& other) const {
  if (dims != other.dims || sizes != other.sizes) return false;
  std::vector<const MatrixX<T>*> theirs;
  other.ForEachBlock(
      [&](std::string_view, const MatrixX<T>& block) { theirs.push_back(&block); });
  bool equal = true;
  std::size_t i = 0;
  ForEachBlock([&](std::string_view, const MatrixX<T>& block) {
    const MatrixX<T>& other_block = *theirs[i++];
    equal = equal && block.rows() == other_block.rows() &&
            block.cols() == other_block.cols() && block == other_block;
  });
  return equal;
}

template struct BasicModelParams<float>;
template struct BasicModelParams<double>;

ModelParams InitModel(const ModelDims& dims, const VocabSizes& sizes, Rng& rng) {
  ModelParams p = ModelParams::Zeros(dims, sizes);
  FillUniform(p.word_emb, rng, 0.1);
  FillUniform(p.pos_emb, rng, 0.1);
  for (LstmWeights<float>* lstm : {&p.forward, &p.backward}) {
    FillXavier(lstm->wx, rng);
    FillXavier(lstm->wh, rng);
    lstm->b.block(dims.lstm_dim, 0, dims.lstm_dim, 1).setOnes();
  }
  FillUniform(p.root, rng, 0.1);
  FillUniform(p.pad, rng, 0.1);
  for (HeadWeights<float>* head : {&p.transition, &p.label}) {
    FillXavier(head->w_hidden, rng);
    FillXavier(head->w_out, rng);
  }
  return p;
}

}  // namespace arcparse
