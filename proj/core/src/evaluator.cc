#include "arcparse/evaluator.h"

#include <exception>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "arcparse/network.h"

namespace arcparse {
namespace {

void CheckAligned(std::span<const GoldTree> gold, std::span<const Parse> predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("gold has " + std::to_string(gold.size()) +
                                " sentences, prediction has " +
                                std::to_string(predicted.size()));
  }
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw std::invalid_argument("sentence '" + gold[s].id + "': gold has " +
                                  std::to_string(gold[s].size()) + " tokens, prediction has " +
                                  std::to_string(predicted[s].size()));
    }
    if (!gold[s].annotated) {
      throw std::invalid_argument("sentence '" + gold[s].id + "' has no gold heads");
    }
  }
}

struct Counts {
  std::int64_t gold = 0;
  std::int64_t recalled = 0;
};

// Splits one side (lengths ordered by increasing distance) into single-length
// buckets and a tail aggregate.
void SideBuckets(const std::map<int, Counts>& side, int sign, int min_bucket_count,
                 std::vector<LengthBucket>& out) {
  std::vector<LengthBucket> singles;
  LengthBucket tail;
  bool in_tail = false;
  for (const auto& [distance, counts] : side) {
    if (!in_tail && counts.gold < min_bucket_count) {
      in_tail = true;
      tail.lo = tail.hi = sign * distance;
      tail.name = sign < 0 ? "<=-" + std::to_string(distance) : ">=+" + std::to_string(distance);
    }
    if (in_tail) {
      tail.gold += counts.gold;
      tail.recalled += counts.recalled;
      if (sign < 0) {
        tail.lo = -distance;
      } else {
        tail.hi = distance;
      }
      continue;
    }
    LengthBucket bucket;
    bucket.lo = bucket.hi = sign * distance;
    bucket.name = sign < 0 ? std::to_string(-distance) : "+" + std::to_string(distance);
    bucket.gold = counts.gold;
    bucket.recalled = counts.recalled;
    singles.push_back(bucket);
  }
  if (sign < 0) {
    if (in_tail) out.push_back(tail);
    out.insert(out.end(), singles.rbegin(), singles.rend());
  } else {
    out.insert(out.end(), singles.begin(), singles.end());
    if (in_tail) out.push_back(tail);
  }
}

}  // namespace

Parse ParseFromArcs(std::span<const Arc> arcs, int n) {
  Parse parse;
  parse.heads.assign(n, -1);
  parse.labels.assign(n, "_");
  for (const Arc& arc : arcs) {
    parse.heads[arc.dependent - 1] = arc.head;
    parse.labels[arc.dependent - 1] = arc.label;
  }
  return parse;
}

Parse GoldParse(const GoldTree& tree) {
  Parse parse;
  for (const Token& token : tree.tokens) {
    parse.heads.push_back(token.head);
    parse.labels.push_back(token.label);
  }
  return parse;
}

std::vector<Arc> GreedyDecode(const GoldTree& sentence, const Vocab& vocab,
                              const ModelParams& params) {
  const int n = sentence.size();
  const SentenceGraph<float> graph(params, LookupIds(sentence, vocab));
  Configuration c = Configuration::Initial(n);
  for (int step = 0; step < DerivationLength(n) && !IsTerminal(c, n); ++step) {
    KindSet legal = LegalTransitions(c);
    if (c.s1() == kRoot && !c.buffer_empty()) {
      // ROOT takes its single dependent only once every word is on the stack.
      KindSet restricted;
      restricted.insert(TransitionKind::kShift);
      legal = restricted;
    }
    const SlotFeatures features = FeaturesOf(c);
    const VectorX<float> kinds = graph.Probabilities(Head::kTransition, features);
    int best = -1;
    for (int k = 0; k < kNumTransitionKinds; ++k) {
      if (!legal.contains(static_cast<TransitionKind>(k))) continue;
      if (best < 0 || kinds(k) > kinds(best)) best = k;
    }
    const auto kind = static_cast<TransitionKind>(best);
    Transition t{kind, {}};
    if (t.is_arc()) {
      if (vocab.num_labels() == 0) {
        t.label = "dep";
      } else {
        const VectorX<float> labels = graph.Probabilities(Head::kLabel, features);
        Eigen::Index label = 0;
        labels.maxCoeff(&label);
        t.label = vocab.Label(static_cast<int>(label));
      }
    }
    c = Apply(std::move(c), t);
  }
  return c.arcs();
}

std::vector<Parse> DecodeAll(std::span<const GoldTree> sentences, const Vocab& vocab,
                             const ModelParams& params, int threads) {
  std::vector<Parse> parses(sentences.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < sentences.size(); i += stride) {
      parses[i] = ParseFromArcs(GreedyDecode(sentences[i], vocab, params), sentences[i].size());
    }
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, sentences.size()));
  if (workers == 1) {
    work(0, 1);
    return parses;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        work(w, workers);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return parses;
}

PunctSet PunctPreset(std::string_view name) {
  if (name == "ctb") return {"PU"};
  if (name == "ud-zh") return {"``", "''", ":", ",", "."};
  if (name == "upos-punct") return {"PUNCT"};
  if (name == "none") return {};
  throw std::invalid_argument("unknown punctuation preset '" + std::string(name) +
                              "' (expected ctb, ud-zh, upos-punct or none)");
}

bool IsPunct(const Token& token, const PunctSet& punct) {
  return punct.contains(token.pos) || punct.contains(token.upos);
}

std::vector<LengthBucket> ArcLengthRecall(std::span<const GoldTree> gold,
                                          std::span<const Parse> predicted,
                                          const PunctSet& punct, int min_bucket_count) {
  CheckAligned(gold, predicted);
  std::map<int, Counts> left;
  std::map<int, Counts> right;
  Counts root;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    for (const Token& token : gold[s].tokens) {
      if (IsPunct(token, punct)) continue;
      const bool recalled = predicted[s].heads[token.index - 1] == token.head;
      Counts* counts = &root;
      if (token.head != kRoot) {
        const int length = token.index - token.head;
        counts = length < 0 ? &left[-length] : &right[length];
      }
      ++counts->gold;
      if (recalled) ++counts->recalled;
    }
  }
  std::vector<LengthBucket> buckets;
  SideBuckets(left, -1, min_bucket_count, buckets);
  SideBuckets(right, +1, min_bucket_count, buckets);
  if (root.gold > 0) buckets.push_back(LengthBucket{"root", 0, 0, root.gold, root.recalled});
  return buckets;
}

EvalReport Evaluate(std::span<const GoldTree> gold, std::span<const Parse> predicted,
                    const PunctSet& punct, int min_bucket_count) {
  CheckAligned(gold, predicted);
  EvalReport report;
  std::int64_t head_correct = 0;
  std::int64_t label_correct = 0;
  std::int64_t exact = 0;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    bool sentence_exact = true;
    for (const Token& token : gold[s].tokens) {
      if (IsPunct(token, punct)) {
        ++report.excluded_punct;
        continue;
      }
      ++report.evaluated_tokens;
      const int i = token.index - 1;
      if (predicted[s].heads[i] == token.head) {
        ++head_correct;
        if (predicted[s].labels[i] == token.label) ++label_correct;
      } else {
        sentence_exact = false;
      }
    }
    if (sentence_exact) ++exact;
  }
  report.sentences = static_cast<std::int64_t>(gold.size());
  if (report.evaluated_tokens > 0) {
    report.uas = 100.0 * head_correct / report.evaluated_tokens;
    report.las = 100.0 * label_correct / report.evaluated_tokens;
  }
  if (report.sentences > 0) report.uem = 100.0 * exact / report.sentences;
  report.arc_length_recall = ArcLengthRecall(gold, predicted, punct, min_bucket_count);
  return report;
}

std::string ReportJson(const EvalReport& report) {
  nlohmann::ordered_json json;
  json["uas"] = report.uas;
  json["las"] = report.las;
  json["uem"] = report.uem;
  json["sentences"] = report.sentences;
  json["evaluated_tokens"] = report.evaluated_tokens;
  json["excluded_punct"] = report.excluded_punct;
  nlohmann::ordered_json buckets = nlohmann::ordered_json::array();
  for (const LengthBucket& b : report.arc_length_recall) {
    nlohmann::ordered_json row;
    row["bucket"] = b.name;
    row["lo"] = b.lo;
    row["hi"] = b.hi;
    row["gold"] = b.gold;
    row["recalled"] = b.recalled;
    row["recall"] = b.recall();
    buckets.push_back(std::move(row));
  }
  json["arc_length_recall"] = std::move(buckets);
  return json.dump();
}

std::string BucketsTsv(const EvalReport& report) {
  std::ostringstream out;
  out << "bucket\tlo\thi\tgold\trecalled\trecall\n";
  for (const LengthBucket& b : report.arc_length_recall) {
    out << b.name << '\t' << b.lo << '\t' << b.hi << '\t' << b.gold << '\t' << b.recalled
        << '\t' << b.recall() << '\n';
  }
  return out.str();
}

}  // namespace arcparse
