#include "arcparse/treebank.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace arcparse {
namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool ParseInt(std::string_view text, int& value) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string_view StripCarriageReturn(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// Index of the token's ID column if the line is a plain token line,
// otherwise 0 (comment, multiword range, empty node).
int TokenLineIndex(std::string_view line) {
  if (line.empty() || line.front() == '#') return 0;
  std::string_view id = line.substr(0, line.find('\t'));
  int index = 0;
  if (!ParseInt(id, index)) return 0;
  return index;
}

std::string SelectPos(std::string_view upos, std::string_view xpos,
                      PosColumn column) {
  switch (column) {
    case PosColumn::kUpos:
      return std::string(upos);
    case PosColumn::kXpos:
      return std::string(xpos);
    case PosColumn::kAuto:
      break;
  }
  return std::string(xpos == "_" ? upos : xpos);
}

// Walks from `node` towards ROOT; returns true if `ancestor` is met.
bool Dominates(std::span<const int> heads, int ancestor, int node) {
  if (ancestor == kRoot) return true;
  int steps = 0;
  const int n = static_cast<int>(heads.size());
  while (node != kRoot && steps <= n) {
    if (node == ancestor) return true;
    node = heads[node - 1];
    ++steps;
  }
  return false;
}

std::vector<int> HeadsOf(const GoldTree& tree) {
  std::vector<int> heads;
  heads.reserve(tree.tokens.size());
  for (const Token& token : tree.tokens) heads.push_back(token.head);
  return heads;
}

class SentenceAccumulator {
 public:
  SentenceAccumulator(const ReadOptions& options, std::string_view source)
      : options_(options), source_(source) {}

  void AddLine(std::string raw, int line_number) {
    std::string_view line = StripCarriageReturn(raw);
    if (!line.empty() && line.front() == '#') {
      constexpr std::string_view kSentId = "# sent_id = ";
      if (line.starts_with(kSentId)) id_ = std::string(line.substr(kSentId.size()));
      lines_.push_back(std::move(raw));
      return;
    }
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 10) {
      throw ParseError(source_, line_number,
                       "expected 10 tab-separated columns, got " +
                           std::to_string(fields.size()));
    }
    std::string_view id = fields[0];
    if (id.find('-') != std::string_view::npos ||
        id.find('.') != std::string_view::npos) {
      lines_.push_back(std::move(raw));
      return;
    }
    Token token;
    if (!ParseInt(id, token.index)) {
      throw ParseError(source_, line_number,
                       "invalid token id '" + std::string(id) + "'");
    }
    if (token.index != static_cast<int>(tokens_.size()) + 1) {
      throw ParseError(source_, line_number,
                       "token id " + std::to_string(token.index) +
                           " out of sequence (expected " +
                           std::to_string(tokens_.size() + 1) + ")");
    }
    token.form = std::string(fields[1]);
    token.upos = std::string(fields[3]);
    token.pos = SelectPos(fields[3], fields[4], options_.pos_column);
    std::string_view head = fields[6];
    if (head == "_" && !options_.require_heads) {
      annotated_ = false;
    } else if (!ParseInt(head, token.head) || token.head < 0) {
      throw ParseError(source_, line_number,
                       "invalid head '" + std::string(head) + "'");
    }
    token.label = std::string(fields[7]);
    tokens_.push_back(std::move(token));
    lines_.push_back(std::move(raw));
  }

  bool empty() const { return tokens_.empty(); }

  GoldTree Finish(int ordinal) {
    std::string id = id_.empty() ? "s" + std::to_string(ordinal) : id_;
    GoldTree tree;
    if (annotated_) {
      try {
        tree = BuildTree(std::move(tokens_), id);
      } catch (const StructureError& e) {
        throw StructureError(std::string(source_) + ": " + e.what());
      }
    } else {
      tree.id = id;
      tree.tokens = std::move(tokens_);
      for (Token& token : tree.tokens) token.head = -1;
      tree.annotated = false;
      tree.projective = false;
    }
    tree.source_lines = std::move(lines_);
    Reset();
    return tree;
  }

  void Reset() {
    tokens_.clear();
    lines_.clear();
    id_.clear();
    annotated_ = true;
  }

 private:
  const ReadOptions& options_;
  std::string_view source_;
  std::vector<Token> tokens_;
  std::vector<std::string> lines_;
  std::string id_;
  bool annotated_ = true;
};

}  // namespace

ParseError::ParseError(std::string_view source, int line,
                       std::string_view reason)
    : std::runtime_error(std::string(source) + ":" + std::to_string(line) +
                         ": " + std::string(reason)),
      line_(line) {}

bool IsWellFormedTree(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  if (n == 0) return false;
  int roots = 0;
  for (int i = 1; i <= n; ++i) {
    int h = heads[i - 1];
    if (h < 0 || h > n || h == i) return false;
    if (h == kRoot) ++roots;
  }
  if (roots != 1) return false;
  // Every token must reach ROOT within n steps.
  for (int i = 1; i <= n; ++i) {
    int node = i;
    int steps = 0;
    while (node != kRoot && steps <= n) {
      node = heads[node - 1];
      ++steps;
    }
    if (node != kRoot) return false;
  }
  return true;
}

bool IsProjective(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  for (int d = 1; d <= n; ++d) {
    const int h = heads[d - 1];
    const int lo = std::min(h, d);
    const int hi = std::max(h, d);
    for (int k = lo + 1; k < hi; ++k) {
      if (!Dominates(heads, h, k)) return false;
    }
  }
  return true;
}

bool IsProjective(const GoldTree& tree) {
  if (!tree.annotated) return false;
  return IsProjective(HeadsOf(tree));
}

GoldTree BuildTree(std::vector<Token> tokens, std::string id) {
  const int n = static_cast<int>(tokens.size());
  GoldTree tree;
  tree.id = std::move(id);
  if (n == 0) throw StructureError("sentence '" + tree.id + "' is empty");
  std::vector<int> heads;
  heads.reserve(n);
  int roots = 0;
  for (int i = 1; i <= n; ++i) {
    const Token& token = tokens[i - 1];
    if (token.index != i) {
      throw StructureError("sentence '" + tree.id + "': token " +
                           std::to_string(i) + " has index " +
                           std::to_string(token.index));
    }
    if (token.head < 0 || token.head > n) {
      throw StructureError("sentence '" + tree.id + "': head " +
                           std::to_string(token.head) + " of token " +
                           std::to_string(i) + " out of range");
    }
    if (token.head == i) {
      throw StructureError("sentence '" + tree.id + "': token " +
                           std::to_string(i) + " is its own head");
    }
    if (token.head == kRoot) ++roots;
    heads.push_back(token.head);
  }
  if (roots != 1) {
    throw StructureError("sentence '" + tree.id + "': expected exactly one root, found " +
                         std::to_string(roots));
  }
  if (!IsWellFormedTree(heads)) {
    throw StructureError("sentence '" + tree.id + "': head links contain a cycle");
  }

  tree.tokens = std::move(tokens);
  tree.left_deps.assign(n + 1, {});
  tree.right_deps.assign(n + 1, {});
  for (int d = 1; d <= n; ++d) {
    const int h = heads[d - 1];
    if (d < h) {
      tree.left_deps[h].push_back(d);
    } else {
      tree.right_deps[h].push_back(d);
    }
  }
  tree.projective = IsProjective(heads);
  return tree;
}

GoldTree TreeFromHeads(std::span<const int> heads,
                       std::span<const std::string> labels, std::string id) {
  std::vector<Token> tokens;
  tokens.reserve(heads.size());
  for (std::size_t i = 0; i < heads.size(); ++i) {
    Token token;
    token.index = static_cast<int>(i) + 1;
    token.form = "w" + std::to_string(i + 1);
    token.pos = "X";
    token.upos = "X";
    token.head = heads[i];
    if (!labels.empty()) {
      token.label = labels[i];
    } else {
      token.label = heads[i] == kRoot ? "root" : "dep";
    }
    tokens.push_back(std::move(token));
  }
  return BuildTree(std::move(tokens), std::move(id));
}

std::vector<GoldTree> ParseConllu(std::istream& in, const ReadOptions& options,
                                  std::string_view source) {
  std::vector<GoldTree> trees;
  SentenceAccumulator block(options, source);
  bool block_has_lines = false;
  std::string raw;
  int line_number = 0;
  auto flush = [&] {
    if (!block.empty()) {
      trees.push_back(block.Finish(static_cast<int>(trees.size()) + 1));
    } else {
      block.Reset();
    }
    block_has_lines = false;
  };
  while (std::getline(in, raw)) {
    ++line_number;
    if (StripCarriageReturn(raw).empty()) {
      if (block_has_lines) flush();
      continue;
    }
    block.AddLine(std::move(raw), line_number);
    block_has_lines = true;
  }
  if (block_has_lines) flush();
  return trees;
}

std::vector<GoldTree> ReadConllu(const std::filesystem::path& path,
                                 const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return ParseConllu(in, options, path.string());
}

void WriteConllu(std::ostream& out, const GoldTree& tree,
                 std::span<const int> heads,
                 std::span<const std::string> labels) {
  if (heads.size() != tree.tokens.size() || labels.size() != tree.tokens.size()) {
    throw std::invalid_argument("sentence '" + tree.id +
                                "': head/label count does not match token count");
  }
  auto head_text = [&](int i) {
    return heads[i - 1] < 0 ? std::string("_") : std::to_string(heads[i - 1]);
  };
  if (tree.source_lines.empty()) {
    if (!tree.id.empty()) out << "# sent_id = " << tree.id << '\n';
    for (const Token& token : tree.tokens) {
      const int i = token.index;
      out << i << '\t' << token.form << "\t_\t"
          << (token.upos.empty() ? "_" : token.upos) << '\t'
          << (token.pos.empty() ? "_" : token.pos) << "\t_\t" << head_text(i)
          << '\t' << labels[i - 1] << "\t_\t_\n";
    }
    out << '\n';
    return;
  }
  for (const std::string& raw : tree.source_lines) {
    const int index = TokenLineIndex(raw);
    if (index == 0) {
      out << raw << '\n';
      continue;
    }
    std::string_view line = raw;
    std::string_view carriage;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
      carriage = "\r";
    }
    std::vector<std::string_view> fields = SplitTabs(line);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c > 0) out << '\t';
      if (c == 6) {
        out << head_text(index);
      } else if (c == 7) {
        out << labels[index - 1];
      } else {
        out << fields[c];
      }
    }
    out << carriage << '\n';
  }
  out << '\n';
}

void WriteConllu(std::ostream& out, const GoldTree& tree) {
  std::vector<int> heads = HeadsOf(tree);
  std::vector<std::string> labels;
  labels.reserve(tree.tokens.size());
  for (const Token& token : tree.tokens) labels.push_back(token.label);
  WriteConllu(out, tree, heads, labels);
}

TreebankStats ComputeStats(std::span<const GoldTree> trees) {
  TreebankStats stats;
  for (const GoldTree& tree : trees) {
    const int n = tree.size();
    ++stats.sentences;
    stats.tokens += n;
    if (!tree.annotated) continue;
    std::vector<char> ambiguous(n + 1, 0);
    std::int64_t heads_here = 0;
    for (int i = 1; i <= n; ++i) {
      const int h = tree.head(i);
      if (h > i) ++stats.left_dep;
      if (h != kRoot && h < i) ++stats.right_dep;
      if (!tree.left_deps[i].empty() && !tree.right_deps[i].empty()) {
        ambiguous[i] = 1;
        ++heads_here;
      }
    }
    stats.amb_heads += heads_here;
    if (heads_here > 0) ++stats.amb_sentences;
    for (int i = 1; i <= n; ++i) {
      int node = i;
      while (node != kRoot) {
        if (ambiguous[node]) {
          ++stats.amb_tokens;
          break;
        }
        node = tree.head(node);
      }
    }
  }
  return stats;
}

std::string StatsTsvHeader() {
  return "name\tsentences\ttokens\tleft_dep\tright_dep\tamb_sentences\tamb_heads\tamb_tokens";
}

std::string StatsTsvRow(std::string_view name, const TreebankStats& stats) {
  std::ostringstream row;
  row << name << '\t' << stats.sentences << '\t' << stats.tokens << '\t'
      << stats.left_dep << '\t' << stats.right_dep << '\t'
      << stats.amb_sentences << '\t' << stats.amb_heads << '\t'
      << stats.amb_tokens;
  return row.str();
}

}  // namespace arcparse
