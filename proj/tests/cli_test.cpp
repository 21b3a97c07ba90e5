#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace lcfrs;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  static int counter = 0;
  fs::path log = fs::temp_directory_path() / ("lcfrs_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::string cmd = std::string(LCFRS_CLI) + " " + args + " > " + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(log);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("lcfrs_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string base() const {
    return "--train " + testutil::data("mini-train.export") + " --dev " + testutil::data("mini-dev.export") + " --out " +
           dir.string();
  }

  fs::path dir;
};

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("extract --k 0 " + base()).code, 1);
  EXPECT_EQ(run("extract --set bogus=1 " + base()).code, 1);
  EXPECT_EQ(run("extract --out " + dir.string()).code, 1);  // no training corpus
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, DataErrors) {
  EXPECT_EQ(run("extract --train /nonexistent.export --out " + dir.string()).code, 2);
  fs::path empty = dir / "empty.export";
  std::ofstream(empty) << "";
  auto r = run("extract --train " + empty.string() + " --out " + (dir / "o").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(dir / "o" / "inventory.tsv"));
  fs::path broken = dir / "broken.export";
  std::ofstream(broken) << "#BOS 1\nw\tA\t--\t--\t500\n";
  EXPECT_EQ(run("roundtrip --input " + broken.string()).code, 2);
}

TEST_F(Cli, FullPipelineWithOracleTags) {
  auto ex = run("extract " + base());
  ASSERT_EQ(ex.code, 0) << ex.out;
  EXPECT_NE(ex.out.find("supertags\t"), std::string::npos);
  EXPECT_NE(ex.out.find("rules after split\t"), std::string::npos);
  for (auto f : {"inventory.tsv", "lexicon.tsv", "grammar.tsv", "extract.resolved.cfg"}) EXPECT_TRUE(fs::exists(dir / f)) << f;

  auto tg = run("tag --oracle --input " + testutil::data("mini-train.export") + " " + base());
  ASSERT_EQ(tg.code, 0) << tg.out;
  auto ps = run("parse --k 1 --k_schedule 1 " + base());
  ASSERT_EQ(ps.code, 0) << ps.out;
  EXPECT_NE(ps.out.find("ok\t48"), std::string::npos) << ps.out;
  auto ev = run("eval --gold " + testutil::data("mini-train.export") + " " + base());
  ASSERT_EQ(ev.code, 0) << ev.out;
  EXPECT_NE(slurp(dir / "eval.tsv").find("f1\t100.00"), std::string::npos);
  EXPECT_NE(slurp(dir / "eval.tsv").find("dis_f1\t100.00"), std::string::npos);

  // predicted trees equal the gold trees
  std::ifstream gin(testutil::data("mini-train.export"));
  auto gold = read_export_sentences(gin);
  std::ifstream pin(dir / "parsed.discbracket");
  auto parsed = read_discbracket_stream(pin);
  ASSERT_EQ(parsed.size(), gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) EXPECT_EQ(parsed[i], gold[i].tree);
  auto status = slurp(dir / "parsed.status.tsv");
  EXPECT_EQ(std::count(status.begin(), status.end(), '\n'), 48);
}

TEST_F(Cli, TrainTagParseIsDeterministic) {
  ASSERT_EQ(run("extract " + base()).code, 0);
  ASSERT_EQ(run("train " + base()).code, 0);
  ASSERT_EQ(run("tag " + base()).code, 0);
  ASSERT_EQ(run("parse " + base()).code, 0);
  auto first = slurp(dir / "parsed.discbracket");
  auto preds = slurp(dir / "predictions.tsv");
  ASSERT_EQ(run("tag --threads 3 " + base()).code, 0);
  ASSERT_EQ(run("parse --threads 3 " + base()).code, 0);
  EXPECT_EQ(slurp(dir / "parsed.discbracket"), first);
  EXPECT_EQ(slurp(dir / "predictions.tsv"), preds);
  auto ev = run("eval --predictions " + (dir / "predictions.tsv").string() + " --tag-k 10 " + base());
  ASSERT_EQ(ev.code, 0) << ev.out;
  EXPECT_NE(ev.out.find("tag acc. (k=10)"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "parse.resolved.cfg"));
}

TEST_F(Cli, ParseRejectsForeignPredictions) {
  ASSERT_EQ(run("extract " + base()).code, 0);
  std::ofstream(dir / "bad.tsv") << "1\t1\tw\t99999:-1\n";
  EXPECT_EQ(run("parse --predictions " + (dir / "bad.tsv").string() + " " + base()).code, 2);
}

TEST_F(Cli, Roundtrip) {
  auto r = run("roundtrip --input " + testutil::data("mini.export"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("mismatches\t0"), std::string::npos);
  EXPECT_EQ(run("roundtrip --input " + testutil::data("example.export")).code, 0);
  auto tag = run("roundtrip --pos_mode tag --input " + testutil::data("poschain.export"));
  EXPECT_EQ(tag.code, 0) << tag.out;
  EXPECT_NE(tag.out.find("known\t1"), std::string::npos);
}

TEST_F(Cli, ConfigFileAndOverrides) {
  fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "train = " << testutil::data("mini-train.export") << "\nout = " << dir.string() << "\nk = 4\n";
  ASSERT_EQ(run("extract -c " + cfg.string() + " --set k=7 --h 1").code, 0);
  auto resolved = slurp(dir / "extract.resolved.cfg");
  EXPECT_NE(resolved.find("k = 7"), std::string::npos);
  EXPECT_NE(resolved.find("h = 1"), std::string::npos);
  EXPECT_EQ(run("extract -c " + (dir / "missing.cfg").string()).code, 1);
}

TEST_F(Cli, SweepK) {
  auto r = run("sweep-k --sweep 1,2 " + base());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("tag acc."), std::string::npos);
  auto tsv = slurp(dir / "sweep.tsv");
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 3);
}
