#ifndef ARCPARSE_TRANSITION_SYSTEM_H_
#define ARCPARSE_TRANSITION_SYSTEM_H_

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arcparse/treebank.h"

namespace arcparse {

// Arc-standard transitions. Arcs are always built between the two topmost
// stack items s1 (below) and s0 (top):
//   shift:   (σ, b|β, A)      -> (σ|b, β, A)
//   larc_l:  (σ|s1|s0, β, A)  -> (σ|s0, β, A ∪ {s0 -l-> s1})
//   rarc_l:  (σ|s1|s0, β, A)  -> (σ|s1, β, A ∪ {s1 -l-> s0})
enum class TransitionKind : std::uint8_t { kShift = 0, kLeftArc = 1, kRightArc = 2 };

inline constexpr int kNumTransitionKinds = 3;

struct Transition {
  TransitionKind kind = TransitionKind::kShift;
  std::string label;  // empty for shift

  static Transition Shift() { return {TransitionKind::kShift, {}}; }
  static Transition LeftArc(std::string label) {
    return {TransitionKind::kLeftArc, std::move(label)};
  }
  static Transition RightArc(std::string label) {
    return {TransitionKind::kRightArc, std::move(label)};
  }

  bool is_arc() const { return kind != TransitionKind::kShift; }
  bool operator==(const Transition&) const = default;
};

// "shift", "larc:LABEL", "rarc:LABEL".
std::string ToString(const Transition& t);
std::string_view KindName(TransitionKind kind);
// Inverse of ToString. Throws std::invalid_argument.
Transition ParseTransition(std::string_view text);
// Orders transitions by their textual rendering.
bool TextualLess(const Transition& a, const Transition& b);

std::string ToString(const std::vector<Transition>& sequence);

struct Arc {
  int head = kRoot;
  std::string label;
  int dependent = 0;

  bool operator==(const Arc&) const = default;
  auto operator<=>(const Arc&) const = default;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Set of transition kinds.
class KindSet {
 public:
  constexpr KindSet() = default;
  constexpr void insert(TransitionKind k) { bits_ |= Bit(k); }
  constexpr bool contains(TransitionKind k) const { return (bits_ & Bit(k)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const {
    return ((bits_ >> 0) & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1);
  }
  constexpr bool operator==(const KindSet&) const = default;

 private:
  static constexpr std::uint8_t Bit(TransitionKind k) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k));
  }
  std::uint8_t bits_ = 0;
};

// Gold heads and labels shared (immutably) between the configurations of one
// oracle-driven derivation.
struct GoldIndex {
  std::vector<int> heads;            // heads[d], d in 1..n; heads[0] = -1
  std::vector<std::string> labels;   // labels[d]
  std::vector<int> left_count;       // gold left dependents per token (0..n)
  std::vector<int> right_count;      // gold right dependents per token (0..n)

  static std::shared_ptr<const GoldIndex> From(const GoldTree& tree);
};

// Parser state (σ, β, A). The buffer is the suffix [cursor, n] of the
// sequence ROOT, w1..wn, so ROOT sits at buffer position 0.
//
// Configurations started from a gold tree additionally carry per-token
// counters of gold dependents not yet attached. They are decremented as arcs
// are built and make the oracle queries O(1). Inference configurations carry
// none.
class Configuration {
 public:
  static Configuration Initial(int sentence_length);
  static Configuration Initial(const GoldTree& gold);

  int sentence_length() const { return n_; }
  const std::vector<int>& stack() const { return stack_; }
  int buffer_cursor() const { return cursor_; }
  int buffer_size() const { return n_ + 1 - cursor_; }
  bool buffer_empty() const { return cursor_ > n_; }
  // Front of the buffer, -1 if exhausted.
  int buffer_front() const { return buffer_empty() ? -1 : cursor_; }
  // Stack top (s0) and the item beneath it (s1); -1 when absent.
  int s0() const { return stack_.empty() ? -1 : stack_.back(); }
  int s1() const { return stack_.size() < 2 ? -1 : stack_[stack_.size() - 2]; }

  const std::vector<Arc>& arcs() const { return arcs_; }
  // Head assigned to `token` so far, -1 if unattached.
  int head_of(int token) const { return heads_[token]; }
  const std::string& label_of(int token) const { return labels_[token]; }

  bool tracks_gold() const { return gold_ != nullptr; }
  const GoldIndex* gold() const { return gold_.get(); }
  int unattached_left(int token) const { return unattached_left_[token]; }
  int unattached_right(int token) const { return unattached_right_[token]; }
  // False once an arc outside the gold tree was added, or a token was
  // reduced while some of its gold dependents were still unattached.
  bool gold_consistent() const { return consistent_; }

  // Mutating form of Apply(); prefer the free functions.
  void ApplyInPlace(const Transition& t);

  bool operator==(const Configuration& other) const;

 private:
  Configuration() = default;

  int n_ = 0;
  int cursor_ = 0;
  std::vector<int> stack_;
  std::vector<Arc> arcs_;
  std::vector<int> heads_;
  std::vector<std::string> labels_;
  std::shared_ptr<const GoldIndex> gold_;
  std::vector<int> unattached_left_;
  std::vector<int> unattached_right_;
  bool consistent_ = true;
};

KindSet LegalTransitions(const Configuration& c);
bool IsLegal(const Configuration& c, const Transition& t);

// Returns the successor configuration. Throws PreconditionError if `t` is not
// legal in `c`.
Configuration Apply(const Configuration& c, const Transition& t);
Configuration Apply(Configuration&& c, const Transition& t);

// Stack = [ROOT], buffer exhausted and exactly n arcs.
bool IsTerminal(const Configuration& c, int n);
bool IsTerminal(const Configuration& c);

// Number of transitions of any complete derivation: n + 1 shifts, n arcs.
inline int DerivationLength(int n) { return 2 * (n + 1) - 1; }

// Short human readable form, e.g. "stack=[0 1 2] buffer=3.. arcs=1".
std::string Summary(const Configuration& c);

}  // namespace arcparse

#endif  // ARCPARSE_TRANSITION_SYSTEM_H_
