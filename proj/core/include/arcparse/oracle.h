#ifndef ARCPARSE_ORACLE_H_
#define ARCPARSE_ORACLE_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arcparse/rng.h"
#include "arcparse/transition_system.h"
#include "arcparse/treebank.h"

namespace arcparse {

// Raised when an oracle is queried off the gold path. Static and hybrid
// oracles are only defined on configurations that can still reach the gold
// tree.
class OracleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct OracleOutcome {
  Transition chosen;
  // One entry, or exactly {shift, larc:l} at an ambiguity point.
  std::vector<Transition> correct_set;

  bool ambiguous() const { return correct_set.size() == 2; }
};

// Deterministic oracle that prefers larc whenever the gold tree allows it,
// attaching left dependents as early as possible.
Transition StandardOracle(const Configuration& c, const GoldTree& gold);

// Returns every correct transition of `c` together with one of them chosen
// at random. When both shift and larc are correct, shift is chosen with
// probability `p_shift` (0.5 reproduces the uniform coin). Every query is
// answered in constant time from the configuration's unattached counters.
OracleOutcome HybridOracle(const Configuration& c, const GoldTree& gold, Rng& rng,
                           double p_shift = 0.5);

// Exhaustive search over gold-arc-only derivations, memoized on
// (stack contents, buffer cursor). Independent of the counters used by the
// oracles above; serves as their testing oracle.
class CorrectSetSearch {
 public:
  explicit CorrectSetSearch(const GoldTree& gold);

  // Legal transitions of `c` from which the gold tree is still reachable.
  std::vector<Transition> CorrectSet(const Configuration& c);
  // Number of distinct derivations from `c` to the gold tree (saturating).
  std::uint64_t CountCompletions(const Configuration& c);

  std::size_t memo_size() const { return memo_.size(); }

 private:
  using Key = std::pair<std::vector<int>, int>;

  // Gold-arc-only moves from (stack, cursor), in textual order.
  std::vector<Transition> Moves(const std::vector<int>& stack, int cursor) const;
  static void Step(std::vector<int>& stack, int& cursor, const Transition& t);
  std::uint64_t Count(const std::vector<int>& stack, int cursor);
  bool ArcsAreGold(const Configuration& c) const;

  const GoldTree& gold_;
  std::map<Key, std::uint64_t> memo_;
};

std::vector<Transition> CorrectSetBruteForce(const Configuration& c,
                                             const GoldTree& gold);

struct Enumeration {
  // Derivations in lexicographic order of their textual rendering.
  std::vector<std::vector<Transition>> sequences;
  // Total number of correct derivations (saturates at UINT64_MAX).
  std::uint64_t count = 0;
  bool truncated = false;
};

// All transition sequences from the initial configuration to the gold tree,
// at most `limit` of them. Throws std::invalid_argument for non-projective
// trees, which no arc-standard derivation produces.
Enumeration EnumerateSequences(const GoldTree& gold, std::size_t limit);

// Drops ROOT's initial shift and the final root attachment, leaving the
// word-level derivation as usually printed.
std::vector<Transition> WordLevelCore(const std::vector<Transition>& sequence);

}  // namespace arcparse

#endif  // ARCPARSE_ORACLE_H_
