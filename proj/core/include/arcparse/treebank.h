#ifndef ARCPARSE_TREEBANK_H_
#define ARCPARSE_TREEBANK_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace arcparse {

// Position of the virtual ROOT token. Real tokens are numbered from 1.
inline constexpr int kRoot = 0;

// Malformed CoNLL-U input. The message carries "source:line: reason".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string_view source, int line, std::string_view reason);
  int line() const { return line_; }

 private:
  int line_;
};

// A sentence whose head assignment is not a single-rooted tree.
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PosColumn {
  kAuto,  // XPOS, falling back to UPOS when XPOS is "_"
  kUpos,
  kXpos,
};

struct Token {
  int index = 0;
  std::string form;
  std::string pos;   // selected tag (see PosColumn)
  std::string upos;  // raw UPOS column, kept for punctuation presets
  int head = -1;     // 0 = ROOT, -1 = unannotated
  std::string label;
};

// One sentence with its gold dependency annotation.
//
// left_deps / right_deps are indexed by head position (0 = ROOT, size n + 1)
// and list dependents in increasing order.
struct GoldTree {
  std::string id;
  std::vector<Token> tokens;
  std::vector<std::vector<int>> left_deps;
  std::vector<std::vector<int>> right_deps;
  bool projective = false;
  // False when the source carried no heads (e.g. raw parser input). Such
  // trees have empty dependent indexes and are never projective.
  bool annotated = true;
  // Raw lines of the CoNLL-U block (comments, ranges, empty nodes included),
  // used to write the sentence back untouched apart from HEAD/DEPREL.
  std::vector<std::string> source_lines;

  int size() const { return static_cast<int>(tokens.size()); }
  int head(int i) const { return tokens[i - 1].head; }
  const std::string& label(int i) const { return tokens[i - 1].label; }
  const Token& token(int i) const { return tokens[i - 1]; }
};

// Builds the dependent indexes and projectivity flag for annotated tokens.
// Throws StructureError for out-of-range heads, self loops, cycles or a root
// count other than one.
GoldTree BuildTree(std::vector<Token> tokens, std::string id = {});

// Convenience for tests and generators: heads[i] is the head of token i + 1.
// Forms are "w1".."wn", POS "X", labels "dep" (or "root" for the root token)
// unless given explicitly.
GoldTree TreeFromHeads(std::span<const int> heads,
                       std::span<const std::string> labels = {},
                       std::string id = {});

struct ReadOptions {
  PosColumn pos_column = PosColumn::kAuto;
  // When false, a "_" HEAD column is accepted and yields an unannotated tree.
  bool require_heads = true;
};

std::vector<GoldTree> ReadConllu(const std::filesystem::path& path,
                                 const ReadOptions& options = {});
std::vector<GoldTree> ParseConllu(std::istream& in,
                                  const ReadOptions& options = {},
                                  std::string_view source = "<stream>");

// Writes the sentence using the tree's own HEAD/DEPREL values. For trees read
// from CoNLL-U this reproduces the input block byte for byte.
void WriteConllu(std::ostream& out, const GoldTree& tree);

// Writes the sentence with HEAD/DEPREL replaced. heads[i] / labels[i] belong
// to token i + 1.
void WriteConllu(std::ostream& out, const GoldTree& tree,
                 std::span<const int> heads,
                 std::span<const std::string> labels);

// True iff every token between a head and its dependent is dominated by the
// head. Equivalent to the absence of crossing arcs with ROOT at position 0.
bool IsProjective(const GoldTree& tree);
bool IsProjective(std::span<const int> heads);

// Returns true if the heads (heads[i] is the head of token i + 1) form a
// single-rooted tree.
bool IsWellFormedTree(std::span<const int> heads);

struct TreebankStats {
  std::int64_t sentences = 0;
  std::int64_t tokens = 0;
  std::int64_t left_dep = 0;
  std::int64_t right_dep = 0;
  std::int64_t amb_sentences = 0;
  std::int64_t amb_heads = 0;
  std::int64_t amb_tokens = 0;

  bool operator==(const TreebankStats&) const = default;
};

// Counting rules:
//  - the root token is neither a left nor a right dependent, so
//    left_dep + right_dep = tokens - sentences;
//  - an ambiguous head has at least one dependent on each side;
//  - amb_tokens counts tokens inside the subtree (head included) of at least
//    one ambiguous head.
TreebankStats ComputeStats(std::span<const GoldTree> trees);

std::string StatsTsvHeader();
std::string StatsTsvRow(std::string_view name, const TreebankStats& stats);

}  // namespace arcparse

#endif  // ARCPARSE_TREEBANK_H_
