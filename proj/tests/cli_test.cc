#include "commands.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "arcparse/evaluator.h"
#include "arcparse/model_io.h"
#include "support/synthetic.h"

namespace arcparse {
namespace {

namespace fs = std::filesystem;

const std::string kDataDir = ARCPARSE_TEST_DATA_DIR;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun run;
  run.code = cli::RunCli(args, out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("arcparse_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(Path("train.conllu")) << testing::ToConllu(testing::ToyTreebank(12, 1));
    std::ofstream(Path("dev.conllu")) << testing::ToConllu(testing::ToyTreebank(5, 2));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::vector<std::string> TrainArgs(const std::string& model) const {
    return {"train",       "--train",     Path("train.conllu"), "--dev",   Path("dev.conllu"),
            "--model",     Path(model),   "--epochs",           "2",       "--word-dim",
            "6",           "--pos-dim",   "4",                  "--lstm-dim", "8",
            "--hidden-dim", "8",          "--threads",          "1"};
  }

  fs::path dir_;
};

TEST_F(CliTest, TrainIsReproducible) {
  std::vector<std::string> a = TrainArgs("a.model");
  std::vector<std::string> b = TrainArgs("b.model");
  for (auto* args : {&a, &b}) {
    args->insert(args->end(), {"--oracle", "hybrid", "--explore", "--seed", "1"});
    const CliRun run = Cli(*args);
    ASSERT_EQ(run.code, 0) << run.err;
  }
  const std::string model_a = Slurp(Path("a.model"));
  EXPECT_FALSE(model_a.empty());
  EXPECT_EQ(model_a, Slurp(Path("b.model")));
  EXPECT_EQ(Slurp(Path("a.model.ckpt")), Slurp(Path("b.model.ckpt")));
}

TEST_F(CliTest, ExploreWithStandardOracleIsUsageError) {
  std::vector<std::string> args = TrainArgs("m.model");
  args.insert(args.end(), {"--oracle", "standard", "--explore"});
  const CliRun run = Cli(args);
  EXPECT_EQ(run.code, cli::kExitUsage);
  EXPECT_NE(run.err.find("hybrid"), std::string::npos) << run.err;
  EXPECT_FALSE(fs::exists(Path("m.model")));
}

TEST_F(CliTest, MetricsAndManifest) {
  std::vector<std::string> args = TrainArgs("m.model");
  args.insert(args.end(), {"--epochs", "3"});
  const CliRun run = Cli(args);
  ASSERT_EQ(run.code, 0) << run.err;
  std::ifstream metrics(Path("m.model.metrics.jsonl"));
  int lines = 0;
  for (std::string line; std::getline(metrics, line); ++lines) {
    const auto json = nlohmann::json::parse(line);
    EXPECT_EQ(json["epoch"], lines + 1);
    EXPECT_TRUE(json.contains("dev_uas"));
  }
  EXPECT_EQ(lines, 3);

  const auto manifest = nlohmann::json::parse(Slurp(Path("m.model.manifest.json")));
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_EQ(manifest["config"]["epochs"], 3);
  EXPECT_EQ(manifest["config"]["oracle"], "hybrid");
  EXPECT_EQ(manifest["config"]["lstm_dim"], 8);
  EXPECT_EQ(manifest["seed"], 1);
  EXPECT_EQ(manifest["inputs"][Path("train.conllu")], cli::FileSha256(Path("train.conllu")));
  EXPECT_EQ(cli::FileSha256(Path("train.conllu")).size(), 64u);
}

TEST_F(CliTest, ConfigFileSitsBetweenDefaultsAndFlags) {
  std::ofstream(Path("run.toml")) << "[train]\nepochs = 2\nseed = 7\n";
  std::vector<std::string> args = TrainArgs("m.model");
  args.erase(args.begin() + 7, args.begin() + 9);  // drop --epochs 2
  args.insert(args.end(), {"--config", Path("run.toml"), "--seed", "8"});
  const CliRun run = Cli(args);
  ASSERT_EQ(run.code, 0) << run.err;
  const auto manifest = nlohmann::json::parse(Slurp(Path("m.model.manifest.json")));
  EXPECT_EQ(manifest["config"]["epochs"], 2);
  EXPECT_EQ(manifest["config"]["seed"], 8);
}

TEST_F(CliTest, ResumeReachesSameState) {
  ASSERT_EQ(Cli(TrainArgs("full.model")).code, 0);
  std::vector<std::string> first = TrainArgs("half.model");
  first.insert(first.end(), {"--epochs", "1"});
  ASSERT_EQ(Cli(first).code, 0);
  std::vector<std::string> second = TrainArgs("resumed.model");
  second.insert(second.end(), {"--resume", Path("half.model.ckpt")});
  const CliRun run = Cli(second);
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(Slurp(Path("resumed.model.ckpt")), Slurp(Path("full.model.ckpt")));
}

TEST_F(CliTest, MissingFileIsAnError) {
  std::vector<std::string> args = TrainArgs("m.model");
  args[2] = Path("absent.conllu");
  const CliRun run = Cli(args);
  EXPECT_EQ(run.code, cli::kExitError);
  EXPECT_NE(run.err.find("absent.conllu"), std::string::npos);
}

TEST_F(CliTest, NonProjectiveOnlyTrainingSetIsAnError) {
  std::vector<std::string> args = TrainArgs("m.model");
  args[2] = kDataDir + "/cycle.conllu";
  EXPECT_EQ(Cli(args).code, cli::kExitError);
  std::ofstream(Path("nonproj.conllu")) << Slurp(kDataDir + "/mixed.conllu").substr(
      Slurp(kDataDir + "/mixed.conllu").find("# sent_id = nonproj"));
  args[2] = Path("nonproj.conllu");
  const CliRun run = Cli(args);
  EXPECT_EQ(run.code, cli::kExitError);
  EXPECT_NE(run.err.find("projective"), std::string::npos) << run.err;
}

TEST_F(CliTest, ParseThenEvalMatchesLibrary) {
  ASSERT_EQ(Cli(TrainArgs("m.model")).code, 0);
  const CliRun parsed = Cli({"parse", "--model", Path("m.model"), "--input", Path("dev.conllu"),
                          "--output", Path("pred.conllu"), "--threads", "2"});
  ASSERT_EQ(parsed.code, 0) << parsed.err;
  const std::vector<GoldTree> reread = ReadConllu(Path("pred.conllu"));
  const std::vector<GoldTree> gold = ReadConllu(Path("dev.conllu"));
  ASSERT_EQ(reread.size(), gold.size());
  for (std::size_t s = 0; s < gold.size(); ++s) {
    for (int i = 1; i <= gold[s].size(); ++i) {
      EXPECT_EQ(reread[s].token(i).form, gold[s].token(i).form);
      EXPECT_EQ(reread[s].token(i).pos, gold[s].token(i).pos);
    }
  }

  const CliRun eval = Cli({"eval", "--gold", Path("dev.conllu"), "--pred", Path("pred.conllu"),
                        "--buckets", Path("buckets.tsv"), "--min-bucket-count", "1"});
  ASSERT_EQ(eval.code, 0) << eval.err;
  const ModelFile model = LoadModel(Path("m.model"));
  const PunctSet punct = PunctPreset("ctb");
  const EvalReport direct =
      Evaluate(gold, DecodeAll(gold, model.vocab, model.params), punct, 1);
  EXPECT_EQ(eval.out, ReportJson(direct) + "\n");

  std::ifstream tsv(Path("buckets.tsv"));
  std::string line;
  std::getline(tsv, line);
  std::int64_t sum = 0;
  while (std::getline(tsv, line)) {
    std::istringstream fields(line);
    std::string name, lo, hi;
    std::int64_t count = 0;
    fields >> name >> lo >> hi >> count;
    sum += count;
  }
  EXPECT_EQ(sum, direct.evaluated_tokens);
}

TEST_F(CliTest, ParseEmptyInput) {
  ASSERT_EQ(Cli(TrainArgs("m.model")).code, 0);
  const CliRun run = Cli({"parse", "--model", Path("m.model"), "--input", kDataDir + "/empty.conllu"});
  EXPECT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(run.out, "");
}

TEST_F(CliTest, ParseRejectsMissingPos) {
  ASSERT_EQ(Cli(TrainArgs("m.model")).code, 0);
  std::ofstream(Path("nopos.conllu")) << "1\ta\t_\t_\t_\t_\t_\t_\t_\t_\n\n";
  const CliRun run = Cli({"parse", "--model", Path("m.model"), "--input", Path("nopos.conllu")});
  EXPECT_EQ(run.code, cli::kExitError);
  EXPECT_NE(run.err.find("POS"), std::string::npos) << run.err;
}

TEST_F(CliTest, EvalSelfAndOneError) {
  const CliRun self = Cli({"eval", "--gold", kDataDir + "/zaiwenzhong.conllu", "--pred",
                        kDataDir + "/zaiwenzhong.conllu"});
  ASSERT_EQ(self.code, 0) << self.err;
  const auto report = nlohmann::json::parse(self.out);
  EXPECT_EQ(report["uas"], 100.0);
  EXPECT_EQ(report["las"], 100.0);
  EXPECT_EQ(report["uem"], 100.0);

  std::string text = Slurp(kDataDir + "/zaiwenzhong.conllu");
  const std::string from = "3\t中\t_\tADP\tLC\t_\t2\t";
  ASSERT_NE(text.find(from), std::string::npos);
  text.replace(text.find(from), from.size(), "3\t中\t_\tADP\tLC\t_\t1\t");
  std::ofstream(Path("pred.conllu")) << text;
  const CliRun one = Cli({"eval", "--gold", kDataDir + "/zaiwenzhong.conllu", "--pred",
                       Path("pred.conllu")});
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_NEAR(nlohmann::json::parse(one.out)["uas"].get<double>(), 66.67, 0.005);

  const CliRun mismatch = Cli({"eval", "--gold", kDataDir + "/zaiwenzhong.conllu", "--pred",
                            Path("dev.conllu")});
  EXPECT_EQ(mismatch.code, cli::kExitError);
}

TEST_F(CliTest, Stats) {
  std::ofstream(Path("chains.conllu"))
      << testing::ToConllu({testing::LeftChain(4), TreeFromHeads(std::vector<int>{0, 1, 2})});
  const CliRun run = Cli({"stats", "--input", kDataDir + "/zaiwenzhong.conllu", Path("chains.conllu")});
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(run.out, StatsTsvHeader() + "\nzaiwenzhong.conllu\t1\t3\t1\t1\t1\t1\t3\n" +
                         "chains.conllu\t2\t7\t3\t2\t0\t0\t0\n");
}

TEST_F(CliTest, Enumerate) {
  const CliRun fig = Cli({"enumerate", "--input", kDataDir + "/zaiwenzhong.conllu"});
  ASSERT_EQ(fig.code, 0) << fig.err;
  EXPECT_EQ(fig.out,
            "# zaiwenzhong\t2 sequences\n"
            "zaiwenzhong\t1\tshift shift shift larc:case shift rarc:case rarc:root\n"
            "zaiwenzhong\t2\tshift shift shift shift rarc:case larc:case rarc:root\n");

  const CliRun mixed = Cli({"enumerate", "--input", kDataDir + "/mixed.conllu"});
  ASSERT_EQ(mixed.code, 0) << mixed.err;
  EXPECT_NE(mixed.out.find("# nonproj\t0 sequences (non-projective)\n"), std::string::npos);

  GoldTree flat_tree = testing::FlatTree(2, 2);
  flat_tree.id = "flat";
  std::ofstream(Path("flat.conllu")) << testing::ToConllu({flat_tree});
  const CliRun flat = Cli({"enumerate", "--input", Path("flat.conllu"), "--limit", "4"});
  ASSERT_EQ(flat.code, 0) << flat.err;
  EXPECT_EQ(flat.out.substr(0, flat.out.find('\n')), "# flat\t6 sequences (listing first 4)");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Cli({}).code, cli::kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(Cli({"enumerate"}).code, cli::kExitUsage);
  EXPECT_EQ(Cli({"eval", "--gold", "a", "--pred", "b", "--punct-preset", "latin"}).code,
            cli::kExitUsage);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

}  // namespace
}  // namespace arcparse
