#ifndef ARCPARSE_EVALUATOR_H_
#define ARCPARSE_EVALUATOR_H_

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arcparse/model.h"
#include "arcparse/transition_system.h"
#include "arcparse/treebank.h"
#include "arcparse/vocab.h"

namespace arcparse {

// Predicted head and relation of every token; heads[i] belongs to token i + 1.
struct Parse {
  std::vector<int> heads;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(heads.size()); }
};

Parse ParseFromArcs(std::span<const Arc> arcs, int n);
Parse GoldParse(const GoldTree& tree);

// Greedy arc-standard decoding: at each step the most probable legal
// transition kind is applied, arcs taking the most probable relation over
// the whole inventory. Attaching a word to ROOT is held back until the
// buffer is empty, so the result is always a single-rooted projective tree
// with exactly n arcs.
std::vector<Arc> GreedyDecode(const GoldTree& sentence, const Vocab& vocab,
                              const ModelParams& params);

// Decodes every sentence; `threads` workers share the read-only model and the
// output order follows the input order.
std::vector<Parse> DecodeAll(std::span<const GoldTree> sentences, const Vocab& vocab,
                             const ModelParams& params, int threads = 1);

// Gold POS tags (selected column or UPOS) that mark punctuation.
using PunctSet = std::set<std::string, std::less<>>;

// Presets: "ctb" = {PU}, "ud-zh" = {`` '' : , .}, "upos-punct" = {PUNCT},
// "none" = {}. Throws std::invalid_argument for other names.
PunctSet PunctPreset(std::string_view name);
bool IsPunct(const Token& token, const PunctSet& punct);

struct LengthBucket {
  // "root", a signed length such as "-2", or a tail aggregate "<=-7" / ">=+5".
  std::string name;
  int lo = 0;  // inclusive signed length range; 0..0 for the root bucket
  int hi = 0;
  std::int64_t gold = 0;
  std::int64_t recalled = 0;

  double recall() const { return gold == 0 ? 0.0 : 100.0 * recalled / gold; }
};

struct EvalReport {
  double uas = 0.0;
  double las = 0.0;
  double uem = 0.0;
  std::int64_t sentences = 0;
  std::int64_t evaluated_tokens = 0;
  std::int64_t excluded_punct = 0;
  std::vector<LengthBucket> arc_length_recall;
};

inline constexpr int kDefaultMinBucketCount = 100;

// UAS/LAS over non-punctuation tokens, UEM over sentences whose
// non-punctuation tokens all carry the gold head. Scores are percentages; a
// treebank without evaluable tokens scores 0 UAS/LAS.
EvalReport Evaluate(std::span<const GoldTree> gold, std::span<const Parse> predicted,
                    const PunctSet& punct, int min_bucket_count = kDefaultMinBucketCount);

// Recall of gold arcs grouped by signed length dependent - head (negative:
// dependent left of its head). Root arcs form their own bucket. On each side,
// the first length with fewer than `min_bucket_count` gold arcs and every
// longer length are merged into one tail bucket.
std::vector<LengthBucket> ArcLengthRecall(std::span<const GoldTree> gold,
                                          std::span<const Parse> predicted,
                                          const PunctSet& punct,
                                          int min_bucket_count = kDefaultMinBucketCount);

std::string ReportJson(const EvalReport& report);
std::string BucketsTsv(const EvalReport& report);

}  // namespace arcparse

#endif  // ARCPARSE_EVALUATOR_H_
