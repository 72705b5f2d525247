#include "commands.h"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "arcparse/evaluator.h"
#include "arcparse/model_io.h"
#include "arcparse/oracle.h"
#include "arcparse/trainer.h"
#include "arcparse/treebank.h"

namespace arcparse::cli {
namespace {

using Json = nlohmann::ordered_json;

// Flag validation failures that CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::map<std::string, PosColumn> kPosColumns = {
    {"auto", PosColumn::kAuto}, {"upos", PosColumn::kUpos}, {"xpos", PosColumn::kXpos}};

int DefaultThreads() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out = OpenOutput(path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path);
}

void RequireFile(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw std::runtime_error("no such file: " + path);
  }
}

// Run manifest shared by every command: what ran, with which resolved
// settings, over which inputs. No timestamps, so identical runs produce
// identical manifests.
class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args)
      : command_(std::move(command)), args_(args) {}

  Json& config() { return config_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void AddInput(const std::string& path) { inputs_[path] = FileSha256(path); }

  std::string Dump() const {
    Json json;
    json["tool"] = "arcparse";
    json["version"] = ARCPARSE_VERSION;
    json["command"] = command_;
    json["argv"] = args_;
    json["config"] = config_;
    if (seed_) {
      json["seed"] = *seed_;
    } else {
      json["seed"] = nullptr;
    }
    json["inputs"] = inputs_;
    return json.dump(2) + "\n";
  }

 private:
  std::string command_;
  std::vector<std::string> args_;
  Json config_ = Json::object();
  std::optional<std::uint64_t> seed_;
  Json inputs_ = Json::object();
};

struct TrainArgs {
  std::string train;
  std::string dev;
  std::string model;
  std::string checkpoint;
  std::string metrics;
  std::string manifest;
  std::string resume;
  std::string oracle = "hybrid";
  std::string punct_preset = "ctb";
  std::string pos_column = "auto";
  int max_train_sentences = 0;
  TrainConfig config;
};

struct ParseArgs {
  std::string model;
  std::string input;
  std::string output;
  std::string manifest;
  int threads = DefaultThreads();
};

struct EvalArgs {
  std::string gold;
  std::string pred;
  std::string report;
  std::string buckets;
  std::string manifest;
  std::string punct_preset = "ctb";
  std::string pos_column = "auto";
  int min_bucket_count = kDefaultMinBucketCount;
};

struct StatsArgs {
  std::vector<std::string> inputs;
  std::string manifest;
  std::string pos_column = "auto";
};

struct EnumerateArgs {
  std::string input;
  std::string manifest;
  std::size_t limit = 64;
};

Json TrainConfigJson(const TrainArgs& a) {
  const TrainConfig& c = a.config;
  Json json;
  json["train"] = a.train;
  json["dev"] = a.dev;
  json["model"] = a.model;
  json["checkpoint"] = a.checkpoint;
  json["metrics"] = a.metrics;
  json["resume"] = a.resume.empty() ? Json(nullptr) : Json(a.resume);
  json["oracle"] = std::string(OracleKindName(c.oracle));
  json["explore"] = c.explore;
  json["p_shift"] = c.p_shift;
  json["epochs"] = c.epochs;
  json["seed"] = c.seed;
  json["dropout"] = c.dropout;
  json["word_dropout"] = c.word_dropout;
  json["word_dim"] = c.dims.word_dim;
  json["pos_dim"] = c.dims.pos_dim;
  json["lstm_dim"] = c.dims.lstm_dim;
  json["hidden_dim"] = c.dims.hidden_dim;
  json["learning_rate"] = c.adam.alpha;
  json["beta1"] = c.adam.beta1;
  json["beta2"] = c.adam.beta2;
  json["epsilon"] = c.adam.epsilon;
  json["punct_preset"] = a.punct_preset;
  json["pos_column"] = a.pos_column;
  json["max_train_sentences"] = a.max_train_sentences;
  json["threads"] = c.threads;
  return json;
}

int RunTrain(TrainArgs& a, const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  a.config.oracle = ParseOracleKind(a.oracle);
  try {
    a.config.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const PunctSet punct = PunctPreset(a.punct_preset);
  const PosColumn pos_column = kPosColumns.at(a.pos_column);
  if (a.checkpoint.empty()) a.checkpoint = a.model + ".ckpt";
  if (a.metrics.empty()) a.metrics = a.model + ".metrics.jsonl";
  if (a.manifest.empty()) a.manifest = a.model + ".manifest.json";

  RequireFile(a.train);
  RequireFile(a.dev);
  std::vector<GoldTree> train = ReadConllu(a.train, ReadOptions{pos_column});
  const std::vector<GoldTree> dev = ReadConllu(a.dev, ReadOptions{pos_column});
  if (a.max_train_sentences > 0 && static_cast<int>(train.size()) > a.max_train_sentences) {
    train.resize(a.max_train_sentences);
  }

  Manifest manifest("train", args);
  manifest.config() = TrainConfigJson(a);
  manifest.set_seed(a.config.seed);
  manifest.AddInput(a.train);
  manifest.AddInput(a.dev);

  TrainHooks hooks;
  hooks.dev_punct = &punct;
  if (!a.resume.empty()) {
    RequireFile(a.resume);
    manifest.AddInput(a.resume);
    ModelFile file = LoadModel(a.resume);
    if (!file.adam) throw std::runtime_error(a.resume + " holds no optimizer state to resume from");
    if (file.params.dims != a.config.dims) {
      throw std::runtime_error(a.resume + " was trained with different layer sizes");
    }
    hooks.resume = TrainState{std::move(file.params), std::move(*file.adam),
                              std::move(file.vocab), file.meta.epochs_completed};
  }

  std::ofstream metrics = OpenOutput(a.metrics);
  hooks.on_epoch = [&](const EpochMetrics& m) {
    metrics << MetricsJsonLine(m) << '\n' << std::flush;
    err << "epoch " << m.epoch << ": loss " << m.train_loss << ", dev UAS " << m.dev_uas
        << "\n";
  };
  const TrainResult result = Train(train, dev, a.config, std::move(hooks));
  if (result.skipped_nonprojective > 0) {
    err << "skipped " << result.skipped_nonprojective << " non-projective training sentences\n";
  }

  const ModelMeta meta{result.final_state.epochs_completed, pos_column};
  SaveModel(a.model, result.best_params, result.vocab, meta);
  SaveModel(a.checkpoint, result.final_state.params, result.final_state.vocab, meta,
            &result.final_state.adam);
  WriteFile(a.manifest, manifest.Dump());
  out << "best epoch " << result.best_epoch << "\n";
  return kExitOk;
}

int RunParse(const ParseArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  if (a.threads < 1) throw UsageError("--threads must be at least 1");
  RequireFile(a.model);
  RequireFile(a.input);
  const ModelFile model = LoadModel(a.model);
  const std::vector<GoldTree> sentences =
      ReadConllu(a.input, ReadOptions{model.meta.pos_column, false});
  for (const GoldTree& s : sentences) {
    for (const Token& t : s.tokens) {
      if (t.pos.empty() || t.pos == "_") {
        throw std::runtime_error("sentence '" + s.id + "' token " + std::to_string(t.index) +
                                 " has no POS tag; the model needs gold POS input");
      }
    }
  }
  const std::vector<Parse> parses = DecodeAll(sentences, model.vocab, model.params, a.threads);

  std::ostringstream text;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    WriteConllu(text, sentences[i], parses[i].heads, parses[i].labels);
  }
  if (a.output.empty()) {
    out << text.str();
  } else {
    WriteFile(a.output, text.str());
  }
  if (!a.manifest.empty()) {
    Manifest manifest("parse", args);
    manifest.config() = Json{{"model", a.model}, {"input", a.input}, {"output", a.output},
                             {"threads", a.threads}};
    manifest.AddInput(a.model);
    manifest.AddInput(a.input);
    WriteFile(a.manifest, manifest.Dump());
  }
  return kExitOk;
}

int RunEval(const EvalArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const PunctSet punct = PunctPreset(a.punct_preset);
  if (a.min_bucket_count < 1) throw UsageError("--min-bucket-count must be at least 1");
  RequireFile(a.gold);
  RequireFile(a.pred);
  const ReadOptions options{kPosColumns.at(a.pos_column)};
  const std::vector<GoldTree> gold = ReadConllu(a.gold, options);
  const std::vector<GoldTree> pred = ReadConllu(a.pred, options);
  std::vector<Parse> parses;
  parses.reserve(pred.size());
  for (const GoldTree& tree : pred) parses.push_back(GoldParse(tree));
  const EvalReport report = Evaluate(gold, parses, punct, a.min_bucket_count);

  const std::string json = ReportJson(report) + "\n";
  if (a.report.empty()) {
    out << json;
  } else {
    WriteFile(a.report, json);
  }
  if (!a.buckets.empty()) WriteFile(a.buckets, BucketsTsv(report));
  if (!a.manifest.empty()) {
    Manifest manifest("eval", args);
    manifest.config() =
        Json{{"gold", a.gold},         {"pred", a.pred},
             {"report", a.report},     {"buckets", a.buckets},
             {"punct_preset", a.punct_preset}, {"pos_column", a.pos_column},
             {"min_bucket_count", a.min_bucket_count}};
    manifest.AddInput(a.gold);
    manifest.AddInput(a.pred);
    WriteFile(a.manifest, manifest.Dump());
  }
  return kExitOk;
}

int RunStats(const StatsArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const ReadOptions options{kPosColumns.at(a.pos_column)};
  std::ostringstream text;
  text << StatsTsvHeader() << '\n';
  for (const std::string& path : a.inputs) {
    RequireFile(path);
    const std::vector<GoldTree> trees = ReadConllu(path, options);
    text << StatsTsvRow(std::filesystem::path(path).filename().string(), ComputeStats(trees))
         << '\n';
  }
  out << text.str();
  if (!a.manifest.empty()) {
    Manifest manifest("stats", args);
    manifest.config() = Json{{"inputs", a.inputs}, {"pos_column", a.pos_column}};
    for (const std::string& path : a.inputs) manifest.AddInput(path);
    WriteFile(a.manifest, manifest.Dump());
  }
  return kExitOk;
}

int RunEnumerate(const EnumerateArgs& a, const std::vector<std::string>& args,
                 std::ostream& out) {
  RequireFile(a.input);
  const std::vector<GoldTree> trees = ReadConllu(a.input);
  std::ostringstream text;
  for (const GoldTree& tree : trees) {
    if (!tree.projective) {
      text << "# " << tree.id << "\t0 sequences (non-projective)\n";
      continue;
    }
    const Enumeration e = EnumerateSequences(tree, a.limit);
    text << "# " << tree.id << '\t' << e.count << " sequences";
    if (e.truncated) text << " (listing first " << e.sequences.size() << ")";
    text << '\n';
    for (std::size_t i = 0; i < e.sequences.size(); ++i) {
      text << tree.id << '\t' << i + 1 << '\t' << ToString(e.sequences[i]) << '\n';
    }
  }
  out << text.str();
  if (!a.manifest.empty()) {
    Manifest manifest("enumerate", args);
    manifest.config() = Json{{"input", a.input}, {"limit", a.limit}};
    manifest.AddInput(a.input);
    WriteFile(a.manifest, manifest.Dump());
  }
  return kExitOk;
}

}  // namespace

std::string FileSha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 unavailable");
  }
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), in.gcount());
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arc-standard dependency parser with static and hybrid oracles", "arcparse"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ARCPARSE_VERSION);
  // A repeated flag overrides earlier occurrences and config-file values.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::vector<std::string> pos_names;
  for (const auto& [name, value] : kPosColumns) pos_names.push_back(name);
  const std::vector<std::string> presets = {"ctb", "ud-zh", "upos-punct", "none"};

  // CLI11 reads config files only on the top-level app; training options live
  // under a [train] table and `train --config` falls through to here.
  app.set_config("--config", "", "TOML file whose [train] table sets train option defaults");

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a parser");
  train_cmd->fallthrough();
  train_cmd->footer("--config FILE reads option defaults from the file's [train] table.");
  train_cmd->add_option("--train", train.train, "Training treebank (CoNLL-U)")->required();
  train_cmd->add_option("--dev", train.dev, "Development treebank (CoNLL-U)")->required();
  train_cmd->add_option("--model", train.model, "Output model (best dev epoch)")->required();
  train_cmd->add_option("--checkpoint", train.checkpoint,
                        "Final-epoch state with optimizer moments [<model>.ckpt]");
  train_cmd->add_option("--metrics", train.metrics, "Per-epoch JSONL [<model>.metrics.jsonl]");
  train_cmd->add_option("--manifest", train.manifest, "Run manifest [<model>.manifest.json]");
  train_cmd->add_option("--resume", train.resume, "Continue from a checkpoint");
  train_cmd->add_option("--oracle", train.oracle)
      ->check(CLI::IsMember({"standard", "hybrid"}))
      ->capture_default_str();
  train_cmd->add_flag("--explore", train.config.explore,
                      "Follow a random correct transition (hybrid only)");
  train_cmd->add_option("--p-shift", train.config.p_shift,
                        "Probability of shift at a shift/larc ambiguity")
      ->capture_default_str();
  train_cmd->add_option("--epochs", train.config.epochs, "Total epochs")->capture_default_str();
  train_cmd->add_option("--seed", train.config.seed)->capture_default_str();
  train_cmd->add_option("--dropout", train.config.dropout, "BiLSTM output dropout")
      ->capture_default_str();
  train_cmd->add_option("--word-dropout", train.config.word_dropout,
                        "UNK replacement rate for singleton words")
      ->capture_default_str();
  train_cmd->add_option("--word-dim", train.config.dims.word_dim)->capture_default_str();
  train_cmd->add_option("--pos-dim", train.config.dims.pos_dim)->capture_default_str();
  train_cmd->add_option("--lstm-dim", train.config.dims.lstm_dim)->capture_default_str();
  train_cmd->add_option("--hidden-dim", train.config.dims.hidden_dim)->capture_default_str();
  train_cmd->add_option("--learning-rate", train.config.adam.alpha)->capture_default_str();
  train_cmd->add_option("--punct-preset", train.punct_preset, "Dev-set punctuation tags")
      ->check(CLI::IsMember(presets))
      ->capture_default_str();
  train_cmd->add_option("--pos-column", train.pos_column)
      ->check(CLI::IsMember(pos_names))
      ->capture_default_str();
  train_cmd->add_option("--max-train-sentences", train.max_train_sentences,
                        "Keep only the first N training sentences (0 = all)")
      ->check(CLI::NonNegativeNumber);
  train.config.threads = DefaultThreads();
  train_cmd->add_option("--threads", train.config.threads, "Dev decoding workers")
      ->check(CLI::PositiveNumber);

  ParseArgs parse;
  CLI::App* parse_cmd = app.add_subcommand("parse", "Parse CoNLL-U input with a trained model");
  parse_cmd->add_option("--model", parse.model)->required();
  parse_cmd->add_option("--input", parse.input)->required();
  parse_cmd->add_option("--output", parse.output, "Output path [stdout]");
  parse_cmd->add_option("--manifest", parse.manifest);
  parse_cmd->add_option("--threads", parse.threads)->check(CLI::PositiveNumber);

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score predictions against gold trees");
  eval_cmd->add_option("--gold", eval.gold)->required();
  eval_cmd->add_option("--pred", eval.pred)->required();
  eval_cmd->add_option("--report", eval.report, "JSON report path [stdout]");
  eval_cmd->add_option("--buckets", eval.buckets, "Arc-length recall TSV path");
  eval_cmd->add_option("--manifest", eval.manifest);
  eval_cmd->add_option("--punct-preset", eval.punct_preset)
      ->check(CLI::IsMember(presets))
      ->capture_default_str();
  eval_cmd->add_option("--pos-column", eval.pos_column)
      ->check(CLI::IsMember(pos_names))
      ->capture_default_str();
  eval_cmd->add_option("--min-bucket-count", eval.min_bucket_count)->capture_default_str();

  StatsArgs stats;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Treebank statistics, one row per file");
  stats_cmd->add_option("--input", stats.inputs)
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  stats_cmd->add_option("--manifest", stats.manifest);
  stats_cmd->add_option("--pos-column", stats.pos_column)->check(CLI::IsMember(pos_names));

  EnumerateArgs enumerate;
  CLI::App* enumerate_cmd =
      app.add_subcommand("enumerate", "List every correct transition sequence");
  enumerate_cmd->add_option("--input", enumerate.input)->required();
  enumerate_cmd->add_option("--limit", enumerate.limit, "Sequences listed per sentence")
      ->capture_default_str();
  enumerate_cmd->add_option("--manifest", enumerate.manifest);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return RunTrain(train, args, out, err);
    if (parse_cmd->parsed()) return RunParse(parse, args, out);
    if (eval_cmd->parsed()) return RunEval(eval, args, out);
    if (stats_cmd->parsed()) return RunStats(stats, args, out);
    if (enumerate_cmd->parsed()) return RunEnumerate(enumerate, args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace arcparse::cli
