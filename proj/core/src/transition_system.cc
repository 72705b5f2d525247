#include "arcparse/transition_system.h"

#include <sstream>

namespace arcparse {

std::string_view KindName(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::kShift:
      return "shift";
    case TransitionKind::kLeftArc:
      return "larc";
    case TransitionKind::kRightArc:
      return "rarc";
  }
  return "?";
}

std::string ToString(const Transition& t) {
  std::string text(KindName(t.kind));
  if (t.is_arc()) {
    text += ':';
    text += t.label;
  }
  return text;
}

std::string ToString(const std::vector<Transition>& sequence) {
  std::string text;
  for (const Transition& t : sequence) {
    if (!text.empty()) text += ' ';
    text += ToString(t);
  }
  return text;
}

Transition ParseTransition(std::string_view text) {
  if (text == "shift") return Transition::Shift();
  std::size_t colon = text.find(':');
  if (colon != std::string_view::npos && colon + 1 < text.size()) {
    std::string_view kind = text.substr(0, colon);
    std::string label(text.substr(colon + 1));
    if (kind == "larc") return Transition::LeftArc(std::move(label));
    if (kind == "rarc") return Transition::RightArc(std::move(label));
  }
  throw std::invalid_argument("unrecognized transition '" + std::string(text) + "'");
}

bool TextualLess(const Transition& a, const Transition& b) {
  return ToString(a) < ToString(b);
}

std::shared_ptr<const GoldIndex> GoldIndex::From(const GoldTree& tree) {
  if (!tree.annotated) {
    throw std::invalid_argument("sentence '" + tree.id + "' carries no gold heads");
  }
  auto index = std::make_shared<GoldIndex>();
  const int n = tree.size();
  index->heads.assign(n + 1, -1);
  index->labels.assign(n + 1, {});
  index->left_count.assign(n + 1, 0);
  index->right_count.assign(n + 1, 0);
  for (int d = 1; d <= n; ++d) {
    index->heads[d] = tree.head(d);
    index->labels[d] = tree.label(d);
  }
  for (int h = 0; h <= n; ++h) {
    index->left_count[h] = static_cast<int>(tree.left_deps[h].size());
    index->right_count[h] = static_cast<int>(tree.right_deps[h].size());
  }
  return index;
}

Configuration Configuration::Initial(int sentence_length) {
  if (sentence_length < 1) {
    throw std::invalid_argument("sentence length must be at least 1, got " +
                                std::to_string(sentence_length));
  }
  Configuration c;
  c.n_ = sentence_length;
  c.cursor_ = 0;
  c.stack_.reserve(sentence_length + 1);
  c.arcs_.reserve(sentence_length);
  c.heads_.assign(sentence_length + 1, -1);
  c.labels_.assign(sentence_length + 1, {});
  return c;
}

Configuration Configuration::Initial(const GoldTree& gold) {
  Configuration c = Initial(gold.size());
  c.gold_ = GoldIndex::From(gold);
  c.unattached_left_ = c.gold_->left_count;
  c.unattached_right_ = c.gold_->right_count;
  return c;
}

bool Configuration::operator==(const Configuration& other) const {
  return n_ == other.n_ && cursor_ == other.cursor_ && stack_ == other.stack_ &&
         arcs_ == other.arcs_;
}

void Configuration::ApplyInPlace(const Transition& t) {
  if (!IsLegal(*this, t)) {
    throw PreconditionError("illegal transition " + ToString(t) + " in " +
                            Summary(*this));
  }
  if (t.kind == TransitionKind::kShift) {
    stack_.push_back(cursor_++);
    return;
  }
  const int top = stack_.back();
  const int below = stack_[stack_.size() - 2];
  const int head = t.kind == TransitionKind::kLeftArc ? top : below;
  const int dependent = t.kind == TransitionKind::kLeftArc ? below : top;
  stack_.pop_back();
  stack_.back() = head;
  heads_[dependent] = head;
  labels_[dependent] = t.label;
  arcs_.push_back(Arc{head, t.label, dependent});

  if (gold_) {
    if (gold_->heads[dependent] != head || gold_->labels[dependent] != t.label ||
        unattached_left_[dependent] != 0 || unattached_right_[dependent] != 0) {
      consistent_ = false;
    }
    if (dependent < head) {
      --unattached_left_[head];
    } else {
      --unattached_right_[head];
    }
  }
}

KindSet LegalTransitions(const Configuration& c) {
  KindSet legal;
  if (!c.buffer_empty()) legal.insert(TransitionKind::kShift);
  if (c.stack().size() >= 2) {
    legal.insert(TransitionKind::kRightArc);
    if (c.s1() != kRoot) legal.insert(TransitionKind::kLeftArc);
  }
  return legal;
}

bool IsLegal(const Configuration& c, const Transition& t) {
  // Arcs carry a label, shift does not.
  if (t.is_arc() == t.label.empty()) return false;
  return LegalTransitions(c).contains(t.kind);
}

Configuration Apply(const Configuration& c, const Transition& t) {
  Configuration next = c;
  next.ApplyInPlace(t);
  return next;
}

Configuration Apply(Configuration&& c, const Transition& t) {
  c.ApplyInPlace(t);
  return std::move(c);
}

bool IsTerminal(const Configuration& c, int n) {
  return c.stack().size() == 1 && c.stack().front() == kRoot && c.buffer_empty() &&
         static_cast<int>(c.arcs().size()) == n;
}

bool IsTerminal(const Configuration& c) { return IsTerminal(c, c.sentence_length()); }

std::string Summary(const Configuration& c) {
  std::ostringstream out;
  out << "stack=[";
  for (std::size_t i = 0; i < c.stack().size(); ++i) {
    if (i > 0) out << ' ';
    out << c.stack()[i];
  }
  out << "] buffer=";
  if (c.buffer_empty()) {
    out << "empty";
  } else {
    out << c.buffer_cursor() << ".." << c.sentence_length();
  }
  out << " arcs=" << c.arcs().size();
  return out.str();
}

}  // namespace arcparse
