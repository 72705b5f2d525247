#include "arcparse/network.h"

#include <cmath>
#include <stdexcept>

namespace arcparse {
namespace {

template <typename T>
T Sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

template <typename T>
void SoftmaxInPlace(VectorX<T>& v) {
  const T max = v.maxCoeff();
  v = (v.array() - max).exp();
  v /= v.sum();
}

}  // namespace

SentenceInput LookupIds(const GoldTree& sentence, const Vocab& vocab) {
  SentenceInput input;
  input.words.reserve(sentence.tokens.size());
  input.pos.reserve(sentence.tokens.size());
  for (const Token& token : sentence.tokens) {
    input.words.push_back(vocab.WordId(token.form));
    input.pos.push_back(vocab.PosId(token.pos));
  }
  return input;
}

SlotFeatures FeaturesOf(const Configuration& c) {
  const int pad = c.sentence_length() + 1;
  return SlotFeatures{c.s1() < 0 ? pad : c.s1(), c.s0() < 0 ? pad : c.s0(),
                      c.buffer_empty() ? pad : c.buffer_front()};
}

template <typename T>
SentenceGraph<T>::SentenceGraph(const BasicModelParams<T>& params, const SentenceInput& input,
                                double dropout_rate, Rng* rng)
    : params_(params), input_(input), n_(input.size()) {
  if (n_ < 1) throw std::invalid_argument("cannot encode an empty sentence");
  if (input.pos.size() != input.words.size()) {
    throw std::invalid_argument("word and POS id sequences differ in length");
  }
  const ModelDims& dims = params.dims;
  const int h = dims.lstm_dim;

  inputs_.resize(dims.input_dim(), n_);
  for (int t = 0; t < n_; ++t) {
    inputs_.col(t).head(dims.word_dim) = params.word_emb.col(input.words[t]);
    inputs_.col(t).tail(dims.pos_dim) = params.pos_emb.col(input.pos[t]);
  }

  forward_.order.resize(n_);
  backward_.order.resize(n_);
  for (int t = 0; t < n_; ++t) {
    forward_.order[t] = t;
    backward_.order[t] = n_ - 1 - t;
  }
  RunDirection(params.forward, forward_);
  RunDirection(params.backward, backward_);

  context_.resize(dims.context_dim(), n_ + 2);
  context_.col(0) = params.root.col(0);
  context_.col(n_ + 1) = params.pad.col(0);
  context_.block(0, 1, h, n_) = forward_.hidden;
  context_.block(h, 1, h, n_) = backward_.hidden;

  if (rng != nullptr && dropout_rate > 0.0) {
    const T keep_scale = T(1) / static_cast<T>(1.0 - dropout_rate);
    dropout_mask_.resize(dims.context_dim(), n_);
    for (int t = 0; t < n_; ++t) {
      for (int r = 0; r < dims.context_dim(); ++r) {
        dropout_mask_(r, t) = UniformDraw(*rng) < dropout_rate ? T(0) : keep_scale;
      }
    }
    context_.middleCols(1, n_).array() *= dropout_mask_.array();
  }

  const int width = dims.context_dim();
  for (Head head : {Head::kTransition, Head::kLabel}) {
    const MatrixX<T>& w = weights(head).w_hidden;
    for (int slot = 0; slot < ModelDims::kFeatureSlots; ++slot) {
      projections_[static_cast<int>(head)][slot].noalias() =
          w.middleCols(slot * width, width) * context_;
    }
  }
}

template <typename T>
void SentenceGraph<T>::RunDirection(const LstmWeights<T>& w, Direction& dir) const {
  const int h = params_.dims.lstm_dim;
  MatrixX<T> zx = w.wx * inputs_;
  dir.gates.resize(4 * h, n_);
  dir.cells.resize(h, n_);
  dir.tanh_cells.resize(h, n_);
  dir.prev_hidden.resize(h, n_);
  dir.prev_cells.resize(h, n_);
  dir.hidden.resize(h, n_);
  VectorX<T> hidden = VectorX<T>::Zero(h);
  VectorX<T> cell = VectorX<T>::Zero(h);
  VectorX<T> z(4 * h);
  for (int t : dir.order) {
    z.noalias() = zx.col(t) + w.b.col(0);
    z.noalias() += w.wh * hidden;
    auto gates = dir.gates.col(t);
    for (int r = 0; r < h; ++r) {
      gates(r) = Sigmoid(z(r));
      gates(h + r) = Sigmoid(z(h + r));
      gates(2 * h + r) = std::tanh(z(2 * h + r));
      gates(3 * h + r) = Sigmoid(z(3 * h + r));
    }
    dir.prev_hidden.col(t) = hidden;
    dir.prev_cells.col(t) = cell;
    cell = gates.segment(h, h).cwiseProduct(cell) +
           gates.segment(0, h).cwiseProduct(gates.segment(2 * h, h));
    dir.cells.col(t) = cell;
    dir.tanh_cells.col(t) = cell.array().tanh();
    hidden = gates.segment(3 * h, h).cwiseProduct(dir.tanh_cells.col(t));
    dir.hidden.col(t) = hidden;
  }
}

template <typename T>
const HeadWeights<T>& SentenceGraph<T>::weights(Head head) const {
  return head == Head::kTransition ? params_.transition : params_.label;
}

template <typename T>
void SentenceGraph<T>::HiddenAndProbs(Head head, const SlotFeatures& f, VectorX<T>& hidden,
                                      VectorX<T>& probs) const {
  const HeadWeights<T>& w = weights(head);
  const auto& proj = projections_[static_cast<int>(head)];
  hidden = proj[0].col(f.s1) + proj[1].col(f.s0) + proj[2].col(f.b0) + w.b_hidden.col(0);
  hidden = hidden.cwiseMax(T(0));
  probs.noalias() = w.w_out * hidden;
  probs += w.b_out.col(0);
  SoftmaxInPlace(probs);
}

template <typename T>
VectorX<T> SentenceGraph<T>::Probabilities(Head head, const SlotFeatures& f) const {
  VectorX<T> hidden;
  VectorX<T> probs;
  HiddenAndProbs(head, f, hidden, probs);
  return probs;
}

template <typename T>
typename SentenceGraph<T>::Scores SentenceGraph<T>::Score(const SlotFeatures& f) const {
  return Scores{Probabilities(Head::kTransition, f), Probabilities(Head::kLabel, f)};
}

template <typename T>
double SentenceGraph<T>::AddLoss(Head head, const SlotFeatures& f,
                                 const TargetDistribution& target) {
  Term term{head, f, {}, {}, {}};
  HiddenAndProbs(head, f, term.hidden, term.probs);
  if (target.num_classes() != term.probs.size()) {
    throw std::invalid_argument("target has " + std::to_string(target.num_classes()) +
                                " classes, head has " + std::to_string(term.probs.size()));
  }
  term.target.resize(target.num_classes());
  for (int i = 0; i < target.num_classes(); ++i) term.target(i) = static_cast<T>(target[i]);
  const double loss =
      SoftCrossEntropy(std::span<const T>(term.probs.data(), term.probs.size()), target);
  total_loss_ += loss;
  terms_.push_back(std::move(term));
  return loss;
}

template <typename T>
void SentenceGraph<T>::BackwardDirection(const LstmWeights<T>& w, const Direction& dir,
                                         const MatrixX<T>& d_hidden, LstmWeights<T>& grads,
                                         MatrixX<T>& d_inputs) const {
  const int h = params_.dims.lstm_dim;
  MatrixX<T> dz(4 * h, n_);
  VectorX<T> dh_next = VectorX<T>::Zero(h);
  VectorX<T> dc_next = VectorX<T>::Zero(h);
  for (auto it = dir.order.rbegin(); it != dir.order.rend(); ++it) {
    const int t = *it;
    const auto gates = dir.gates.col(t);
    const auto in = gates.segment(0, h);
    const auto fg = gates.segment(h, h);
    const auto g = gates.segment(2 * h, h);
    const auto o = gates.segment(3 * h, h);
    const auto tc = dir.tanh_cells.col(t);
    VectorX<T> dh = d_hidden.col(t) + dh_next;
    VectorX<T> dc = dc_next.array() + dh.array() * o.array() * (T(1) - tc.array().square());
    auto dzt = dz.col(t);
    dzt.segment(0, h) = dc.array() * g.array() * in.array() * (T(1) - in.array());
    dzt.segment(h, h) =
        dc.array() * dir.prev_cells.col(t).array() * fg.array() * (T(1) - fg.array());
    dzt.segment(2 * h, h) = dc.array() * in.array() * (T(1) - g.array().square());
    dzt.segment(3 * h, h) = dh.array() * tc.array() * o.array() * (T(1) - o.array());
    dc_next = dc.cwiseProduct(fg);
    dh_next.noalias() = w.wh.transpose() * dzt;
  }
  grads.wx.noalias() += dz * inputs_.transpose();
  grads.wh.noalias() += dz * dir.prev_hidden.transpose();
  grads.b.col(0) += dz.rowwise().sum();
  d_inputs.noalias() += w.wx.transpose() * dz;
}

template <typename T>
void SentenceGraph<T>::Backward(BasicModelParams<T>& grads) const {
  const ModelDims& dims = params_.dims;
  const int width = dims.context_dim();
  const int h = dims.lstm_dim;

  MatrixX<T> d_context = MatrixX<T>::Zero(width, n_ + 2);
  for (Head head : {Head::kTransition, Head::kLabel}) {
    const HeadWeights<T>& w = weights(head);
    HeadWeights<T>& g = head == Head::kTransition ? grads.transition : grads.label;
    MatrixX<T> d_proj[ModelDims::kFeatureSlots];
    bool used = false;
    for (const Term& term : terms_) {
      if (term.head != head) continue;
      if (!used) {
        for (auto& d : d_proj) d = MatrixX<T>::Zero(dims.hidden_dim, n_ + 2);
        used = true;
      }
      VectorX<T> d_logits = term.probs - term.target;
      g.w_out.noalias() += d_logits * term.hidden.transpose();
      g.b_out.col(0) += d_logits;
      VectorX<T> d_hidden = w.w_out.transpose() * d_logits;
      d_hidden = (term.hidden.array() > T(0)).select(d_hidden, T(0));
      g.b_hidden.col(0) += d_hidden;
      d_proj[0].col(term.slots.s1) += d_hidden;
      d_proj[1].col(term.slots.s0) += d_hidden;
      d_proj[2].col(term.slots.b0) += d_hidden;
    }
    if (!used) continue;
    for (int slot = 0; slot < ModelDims::kFeatureSlots; ++slot) {
      g.w_hidden.middleCols(slot * width, width).noalias() +=
          d_proj[slot] * context_.transpose();
      d_context.noalias() += w.w_hidden.middleCols(slot * width, width).transpose() * d_proj[slot];
    }
  }

  grads.root.col(0) += d_context.col(0);
  grads.pad.col(0) += d_context.col(n_ + 1);
  MatrixX<T> d_tokens = d_context.middleCols(1, n_);
  if (dropout_mask_.size() > 0) d_tokens.array() *= dropout_mask_.array();

  MatrixX<T> d_inputs = MatrixX<T>::Zero(dims.input_dim(), n_);
  MatrixX<T> d_forward = d_tokens.topRows(h);
  MatrixX<T> d_backward = d_tokens.bottomRows(h);
  BackwardDirection(params_.forward, forward_, d_forward, grads.forward, d_inputs);
  BackwardDirection(params_.backward, backward_, d_backward, grads.backward, d_inputs);

  for (int t = 0; t < n_; ++t) {
    grads.word_emb.col(input_.words[t]) += d_inputs.col(t).head(dims.word_dim);
    grads.pos_emb.col(input_.pos[t]) += d_inputs.col(t).tail(dims.pos_dim);
  }
}

template class SentenceGraph<float>;
template class SentenceGraph<double>;

MatrixX<float> Encode(const ModelParams& params, const SentenceInput& input, bool train_mode,
                      Rng* rng, double dropout_rate) {
  SentenceGraph<float> graph(params, input, train_mode ? dropout_rate : 0.0,
                             train_mode ? rng : nullptr);
  return graph.context().leftCols(input.size() + 1);
}

}  // namespace arcparse
