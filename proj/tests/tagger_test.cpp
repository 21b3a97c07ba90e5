#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

using namespace lcfrs;

namespace {

BaselineModel small_model(double lambda = 0.1) {
  Lexicon lex;
  lex["hearing"][7] = 10;
  lex["Tisch"][2] = 3;
  lex["Vortragssaal"][4] = 5;
  lex["Vortragssaal"][2] = 1;
  lex["the"][1] = 4;
  return BaselineModel::train(lex, 10, {lambda, 4});
}

}  // namespace

TEST(Suffixes, Utf8CodePoints) {
  EXPECT_EQ(detail::suffixes("Hörsaal", 4), (std::vector<std::string>{"l", "al", "aal", "saal"}));
  EXPECT_EQ(detail::suffixes("für", 4), (std::vector<std::string>{"r", "ür", "für"}));
  EXPECT_TRUE(detail::suffixes("abc", 0).empty());
}

TEST(Baseline, SingleTagWord) {
  auto m = small_model();
  auto top = m.predict_word("hearing", 1);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].tag, 7u);
  EXPECT_DOUBLE_EQ(top[0].score, std::log(10.1 / (10 + 0.1 * 10)));
}

TEST(Baseline, SuffixBackoff) {
  auto m = small_model();
  auto top = m.predict_word("Hörsaal", 2);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].tag, 4u);
  EXPECT_EQ(top[1].tag, 2u);
  EXPECT_DOUBLE_EQ(top[0].score, std::log(5.1 / (6 + 0.1 * 10)));
}

TEST(Baseline, GlobalBackoffForUnknownShape) {
  auto m = small_model();
  auto top = m.predict_word("zzzq", 3);
  ASSERT_EQ(top.size(), 3u);
  // global counts: tag 7 (10), tag 4 (5), tags 1 and 2 (4 each)
  EXPECT_EQ(top[0].tag, 7u);
  EXPECT_EQ(top[1].tag, 4u);
  EXPECT_EQ(top[2].tag, 1u);
}

TEST(Baseline, KLargerThanInventoryGivesAllTags) {
  auto m = small_model();
  auto all = m.predict_word("hearing", 50);
  ASSERT_EQ(all.size(), 10u);
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < all.size(); ++i) {
    seen.insert(all[i].tag);
    if (i) {
      EXPECT_GE(all[i - 1].score, all[i].score);
    }
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(Baseline, TopKIsPrefixOfTopKPlusOne) {
  auto m = small_model();
  for (std::string w : {"hearing", "Vortragssaal", "Hörsaal", "unknown", "the"})
    for (std::size_t k = 1; k < 10; ++k) {
      auto a = m.predict_word(w, k), b = m.predict_word(w, k + 1);
      ASSERT_EQ(a.size(), k);
      EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin())) << w << " k=" << k;
    }
}

TEST(Baseline, RejectsKZero) { EXPECT_THROW(small_model().predict("s", {"a"}, 0), PreconditionError); }

TEST(Baseline, ModelFileRoundtrip) {
  auto m = small_model(0.25);
  std::stringstream ss;
  m.write(ss);
  auto back = BaselineModel::read(ss);
  EXPECT_EQ(back.num_tags(), 10u);
  EXPECT_DOUBLE_EQ(back.config().lambda, 0.25);
  for (std::string w : {"hearing", "Hörsaal", "xyz"}) EXPECT_EQ(back.predict_word(w, 5), m.predict_word(w, 5));
  std::stringstream again;
  back.write(again);
  std::stringstream first;
  m.write(first);
  EXPECT_EQ(again.str(), first.str());
}

TEST(Baseline, ModelFileErrors) {
  std::istringstream bad("C\t10\t0.1\t4\nW\thearing\t12\t3\n");
  EXPECT_THROW(BaselineModel::read(bad), FormatError);
  std::istringstream bad2("Q\tx\n");
  EXPECT_THROW(BaselineModel::read(bad2), FormatError);
}

TEST(Predictions, OneTokenFile) {
  std::istringstream in("0\t1\thello\t3:-0.1\n");
  auto p = read_predictions(in, 5);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].id, "0");
  EXPECT_EQ(p[0].words, (std::vector<std::string>{"hello"}));
  ASSERT_EQ(p[0].tags.size(), 1u);
  EXPECT_EQ(p[0].tags[0], (std::vector<ScoredTag>{{3, -0.1}}));
}

TEST(Predictions, FileRoundtrip) {
  auto m = small_model();
  std::vector<SentencePrediction> preds{m.predict("a", {"the", "hearing"}, 3), m.predict("b", {"Hörsaal"}, 2)};
  std::ostringstream os;
  write_predictions(os, preds);
  std::istringstream in(os.str());
  auto back = read_predictions(in, 10);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].id, preds[i].id);
    EXPECT_EQ(back[i].words, preds[i].words);
    EXPECT_EQ(back[i].tags, preds[i].tags);
  }
  std::ostringstream again;
  write_predictions(again, back);
  EXPECT_EQ(again.str(), os.str());
}

TEST(Predictions, MalformedScoreNamesLine) {
  std::istringstream in("0\t1\thello\t3:-0.1\n0\t2\tworld\t3:abc\n");
  try {
    read_predictions(in, 5);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
  }
}

TEST(Predictions, OtherErrors) {
  std::istringstream out_of_range("0\t1\thello\t9:-0.1\n");
  EXPECT_THROW(read_predictions(out_of_range, 5), FormatError);
  std::istringstream skipped("0\t2\thello\t1:-0.1\n");
  EXPECT_THROW(read_predictions(skipped, 5), FormatError);
  std::istringstream fields("0\t1\thello\n");
  EXPECT_THROW(read_predictions(fields, 5), FormatError);
  std::istringstream nocolon("0\t1\thello\t3\n");
  EXPECT_THROW(read_predictions(nocolon, 5), FormatError);
}

TEST(Oracle, GoldTagsAtKOne) {
  std::ifstream in(testutil::data("mini-train.export"));
  auto corpus = read_export_sentences(in);
  auto ex = extract(corpus, {});
  auto model = BaselineModel::train(ex.lexicon, ex.inventory.size());
  // words seen with a single tag get that tag at k=1
  for (std::size_t s = 0; s < ex.gold.size(); ++s) {
    const auto w = words(corpus[s].tree);
    auto pred = model.predict(corpus[s].id, w, 1);
    for (std::size_t i = 0; i < w.size(); ++i)
      if (ex.lexicon.at(w[i]).size() == 1) {
        EXPECT_EQ(pred.tags[i][0].tag, ex.gold[s][i]) << w[i];
      }
  }
  auto o = oracle_prediction("x", {"a", "b"}, {3, kNoTag});
  EXPECT_EQ(o.tags[0], (std::vector<ScoredTag>{{3, 0.0}}));
  EXPECT_TRUE(o.tags[1].empty());
}

// frozen values for the bundled data
TEST(Regression, MiniTreebankGoldens) {
  auto train = read_corpus(testutil::data("mini-train.export"));
  auto dev = read_corpus(testutil::data("mini-dev.export"));
  auto ex = extract(train, {});
  EXPECT_EQ(ex.inventory.size(), 45u);
  EXPECT_TRUE(ex.skipped.empty());
  auto model = BaselineModel::train(ex.lexicon, ex.inventory.size(), {});
  RunConfig cfg;
  cfg.sweep = {1, 10};
  auto rows = sweep_k(model, ex.inventory, dev, cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].tag_acc, 100.0 * 71 / 99);
  EXPECT_DOUBLE_EQ(rows[1].tag_acc, 100.0 * 97 / 99);
  EXPECT_EQ(rows[1].noparse, 2u);
}
