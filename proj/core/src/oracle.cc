#include "arcparse/oracle.h"

#include <limits>

namespace arcparse {
namespace {

void CheckGoldPath(const Configuration& c, const GoldTree& gold) {
  if (!c.tracks_gold()) {
    throw OracleError("oracle queried on a configuration without gold tracking");
  }
  if (c.sentence_length() != gold.size()) {
    throw OracleError("configuration length " + std::to_string(c.sentence_length()) +
                      " does not match sentence '" + gold.id + "' of length " +
                      std::to_string(gold.size()));
  }
  if (!c.gold_consistent()) {
    throw OracleError("configuration is off the gold path: " + Summary(c));
  }
#ifndef NDEBUG
  // The counters must agree with a recount against the gold arcs.
  const GoldIndex& index = *c.gold();
  std::vector<int> left = index.left_count;
  std::vector<int> right = index.right_count;
  for (const Arc& arc : c.arcs()) {
    if (arc.dependent < arc.head) {
      --left[arc.head];
    } else {
      --right[arc.head];
    }
  }
  for (int t = 0; t <= c.sentence_length(); ++t) {
    if (left[t] != c.unattached_left(t) || right[t] != c.unattached_right(t)) {
      throw std::logic_error("unattached counters out of sync at token " +
                             std::to_string(t));
    }
  }
#endif
}

bool GoldLeftArc(const Configuration& c, const GoldTree& gold) {
  return c.stack().size() >= 2 && c.s1() != kRoot && gold.head(c.s1()) == c.s0();
}

bool GoldRightArc(const Configuration& c, const GoldTree& gold) {
  return c.stack().size() >= 2 && gold.head(c.s0()) == c.s1();
}

bool HasUnattached(const Configuration& c, int token) {
  return c.unattached_left(token) > 0 || c.unattached_right(token) > 0;
}

Transition ShiftOrThrow(const Configuration& c) {
  if (c.buffer_empty()) {
    throw OracleError("no correct transition: configuration cannot reach the gold tree (" +
                      Summary(c) + ")");
  }
  return Transition::Shift();
}

std::uint64_t SaturatingAdd(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  return a > max - b ? max : a + b;
}

}  // namespace

Transition StandardOracle(const Configuration& c, const GoldTree& gold) {
  CheckGoldPath(c, gold);
  if (GoldLeftArc(c, gold)) return Transition::LeftArc(gold.label(c.s1()));
  if (GoldRightArc(c, gold) && !HasUnattached(c, c.s0())) {
    return Transition::RightArc(gold.label(c.s0()));
  }
  return ShiftOrThrow(c);
}

OracleOutcome HybridOracle(const Configuration& c, const GoldTree& gold, Rng& rng,
                           double p_shift) {
  CheckGoldPath(c, gold);
  OracleOutcome outcome;
  if (GoldLeftArc(c, gold)) {
    Transition larc = Transition::LeftArc(gold.label(c.s1()));
    if (c.unattached_right(c.s0()) > 0) {
      if (c.buffer_empty()) ShiftOrThrow(c);
      outcome.chosen = UniformDraw(rng) < 1.0 - p_shift ? larc : Transition::Shift();
      outcome.correct_set = {Transition::Shift(), std::move(larc)};
    } else {
      outcome.chosen = larc;
      outcome.correct_set = {std::move(larc)};
    }
  } else if (GoldRightArc(c, gold) && !HasUnattached(c, c.s0())) {
    outcome.chosen = Transition::RightArc(gold.label(c.s0()));
    outcome.correct_set = {outcome.chosen};
  } else {
    outcome.chosen = ShiftOrThrow(c);
    outcome.correct_set = {outcome.chosen};
  }
  return outcome;
}

CorrectSetSearch::CorrectSetSearch(const GoldTree& gold) : gold_(gold) {
  if (!gold.annotated) {
    throw std::invalid_argument("sentence '" + gold.id + "' carries no gold heads");
  }
}

std::vector<Transition> CorrectSetSearch::Moves(const std::vector<int>& stack,
                                                int cursor) const {
  std::vector<Transition> moves;
  if (stack.size() >= 2) {
    const int s0 = stack.back();
    const int s1 = stack[stack.size() - 2];
    if (s1 != kRoot && gold_.head(s1) == s0) {
      moves.push_back(Transition::LeftArc(gold_.label(s1)));
    }
    if (gold_.head(s0) == s1) moves.push_back(Transition::RightArc(gold_.label(s0)));
  }
  if (cursor <= gold_.size()) moves.push_back(Transition::Shift());
  return moves;
}

void CorrectSetSearch::Step(std::vector<int>& stack, int& cursor, const Transition& t) {
  switch (t.kind) {
    case TransitionKind::kShift:
      stack.push_back(cursor++);
      break;
    case TransitionKind::kLeftArc: {
      const int s0 = stack.back();
      stack.pop_back();
      stack.back() = s0;
      break;
    }
    case TransitionKind::kRightArc:
      stack.pop_back();
      break;
  }
}

std::uint64_t CorrectSetSearch::Count(const std::vector<int>& stack, int cursor) {
  const int n = gold_.size();
  if (cursor > n && stack.size() == 1 && stack.front() == kRoot) return 1;
  Key key{stack, cursor};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  std::uint64_t total = 0;
  for (const Transition& t : Moves(stack, cursor)) {
    std::vector<int> next_stack = stack;
    int next_cursor = cursor;
    Step(next_stack, next_cursor, t);
    total = SaturatingAdd(total, Count(next_stack, next_cursor));
  }
  memo_.emplace(std::move(key), total);
  return total;
}

bool CorrectSetSearch::ArcsAreGold(const Configuration& c) const {
  if (c.sentence_length() != gold_.size()) return false;
  for (const Arc& arc : c.arcs()) {
    if (gold_.head(arc.dependent) != arc.head || gold_.label(arc.dependent) != arc.label) {
      return false;
    }
  }
  return true;
}

std::vector<Transition> CorrectSetSearch::CorrectSet(const Configuration& c) {
  std::vector<Transition> correct;
  if (!ArcsAreGold(c)) return correct;
  for (const Transition& t : Moves(c.stack(), c.buffer_cursor())) {
    std::vector<int> stack = c.stack();
    int cursor = c.buffer_cursor();
    Step(stack, cursor, t);
    if (Count(stack, cursor) > 0) correct.push_back(t);
  }
  return correct;
}

std::uint64_t CorrectSetSearch::CountCompletions(const Configuration& c) {
  if (!ArcsAreGold(c)) return 0;
  return Count(c.stack(), c.buffer_cursor());
}

std::vector<Transition> CorrectSetBruteForce(const Configuration& c, const GoldTree& gold) {
  CorrectSetSearch search(gold);
  return search.CorrectSet(c);
}

Enumeration EnumerateSequences(const GoldTree& gold, std::size_t limit) {
  if (!gold.annotated || !gold.projective) {
    throw std::invalid_argument("sentence '" + gold.id +
                                "' is not projective; no arc-standard derivation exists");
  }
  CorrectSetSearch search(gold);
  Enumeration result;
  Configuration start = Configuration::Initial(gold.size());
  result.count = search.CountCompletions(start);
  result.truncated = result.count > limit;

  std::vector<Transition> path;
  // Depth-first walk restricted to transitions with a live completion.
  auto walk = [&](auto&& self, const Configuration& c) -> void {
    if (result.sequences.size() >= limit) return;
    if (IsTerminal(c, gold.size())) {
      result.sequences.push_back(path);
      return;
    }
    for (const Transition& t : search.CorrectSet(c)) {
      path.push_back(t);
      self(self, Apply(c, t));
      path.pop_back();
      if (result.sequences.size() >= limit) return;
    }
  };
  walk(walk, start);
  return result;
}

std::vector<Transition> WordLevelCore(const std::vector<Transition>& sequence) {
  if (sequence.size() < 2) return {};
  return {sequence.begin() + 1, sequence.end() - 1};
}

}  // namespace arcparse
