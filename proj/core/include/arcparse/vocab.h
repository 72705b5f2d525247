#ifndef ARCPARSE_VOCAB_H_
#define ARCPARSE_VOCAB_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "arcparse/treebank.h"

namespace arcparse {

// Dense string <-> id table.
class SymbolTable {
 public:
  int Add(std::string_view symbol);
  // -1 if absent.
  int Find(std::string_view symbol) const;
  const std::string& symbol(int id) const { return symbols_[id]; }
  int size() const { return static_cast<int>(symbols_.size()); }
  const std::vector<std::string>& symbols() const { return symbols_; }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> symbols_;
};

// Word, POS and relation inventories. Id 0 of the word and POS tables is the
// unknown symbol; relations have no unknown entry.
class Vocab {
 public:
  static constexpr int kUnk = 0;
  static constexpr std::string_view kUnkSymbol = "<unk>";

  Vocab();
  static Vocab Build(std::span<const GoldTree> trees);

  int WordId(std::string_view form) const;
  int PosId(std::string_view tag) const;
  // -1 for relations never seen in training.
  int LabelId(std::string_view label) const { return labels_.Find(label); }
  const std::string& Label(int id) const { return labels_.symbol(id); }

  // Training frequency of a word id (0 for UNK).
  int WordCount(int id) const { return word_counts_[id]; }

  int num_words() const { return words_.size(); }
  int num_pos() const { return pos_.size(); }
  int num_labels() const { return labels_.size(); }

  const SymbolTable& words() const { return words_; }
  const SymbolTable& pos() const { return pos_; }
  const SymbolTable& labels() const { return labels_; }

  // Used by deserialization; entries must already exclude the UNK symbol.
  static Vocab FromTables(const std::vector<std::string>& words,
                          const std::vector<int>& word_counts,
                          const std::vector<std::string>& pos,
                          const std::vector<std::string>& labels);

  bool operator==(const Vocab& other) const;

 private:
  SymbolTable words_;
  std::vector<int> word_counts_;
  SymbolTable pos_;
  SymbolTable labels_;
};

}  // namespace arcparse

#endif  // ARCPARSE_VOCAB_H_
