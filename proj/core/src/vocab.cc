#include "arcparse/vocab.h"

#include <stdexcept>

namespace arcparse {

int SymbolTable::Add(std::string_view symbol) {
  auto [it, inserted] = ids_.try_emplace(std::string(symbol), size());
  if (inserted) symbols_.emplace_back(symbol);
  return it->second;
}

int SymbolTable::Find(std::string_view symbol) const {
  auto it = ids_.find(std::string(symbol));
  return it == ids_.end() ? -1 : it->second;
}

Vocab::Vocab() {
  words_.Add(kUnkSymbol);
  word_counts_.push_back(0);
  pos_.Add(kUnkSymbol);
}

Vocab Vocab::Build(std::span<const GoldTree> trees) {
  Vocab vocab;
  for (const GoldTree& tree : trees) {
    for (const Token& token : tree.tokens) {
      const int id = vocab.words_.Add(token.form);
      if (id == static_cast<int>(vocab.word_counts_.size())) vocab.word_counts_.push_back(0);
      ++vocab.word_counts_[id];
      vocab.pos_.Add(token.pos);
      if (tree.annotated) vocab.labels_.Add(token.label);
    }
  }
  return vocab;
}

Vocab Vocab::FromTables(const std::vector<std::string>& words,
                        const std::vector<int>& word_counts,
                        const std::vector<std::string>& pos,
                        const std::vector<std::string>& labels) {
  if (words.size() != word_counts.size()) {
    throw std::invalid_argument("word table and count table differ in size");
  }
  Vocab vocab;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (vocab.words_.Add(words[i]) != static_cast<int>(i) + 1) {
      throw std::invalid_argument("duplicate word '" + words[i] + "'");
    }
    vocab.word_counts_.push_back(word_counts[i]);
  }
  for (const std::string& tag : pos) {
    if (vocab.pos_.Add(tag) == kUnk) throw std::invalid_argument("POS table repeats UNK");
  }
  for (const std::string& label : labels) vocab.labels_.Add(label);
  if (vocab.pos_.size() != static_cast<int>(pos.size()) + 1 ||
      vocab.labels_.size() != static_cast<int>(labels.size())) {
    throw std::invalid_argument("duplicate entries in POS or label table");
  }
  return vocab;
}

int Vocab::WordId(std::string_view form) const {
  const int id = words_.Find(form);
  return id < 0 ? kUnk : id;
}

int Vocab::PosId(std::string_view tag) const {
  const int id = pos_.Find(tag);
  return id < 0 ? kUnk : id;
}

bool Vocab::operator==(const Vocab& other) const {
  return words_.symbols() == other.words_.symbols() && word_counts_ == other.word_counts_ &&
         pos_.symbols() == other.pos_.symbols() &&
         labels_.symbols() == other.labels_.symbols();
}

}  // namespace arcparse
