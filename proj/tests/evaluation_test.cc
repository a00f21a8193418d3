// Copyright 2026 The pseudoev Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"
#include "pseudoev/evaluation.h"
#include "pseudoev/inference.h"
#include "pseudoev/synthetic.h"
#include "test_util.h"

namespace pseudoev {
namespace {

using nlohmann::json;
using testing::MakeExample;

double Fraction(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

SentenceSet Units(const json& j) {
  SentenceSet out;
  for (const auto& u : j) out.insert({u[0].get<int>(), u[1].get<int>()});
  return out;
}

TEST(Metrics, GoldenFile) {
  std::ifstream in(std::string(PSEUDOEV_TEST_DATA_DIR) + "/metric_golden.json");
  ASSERT_TRUE(in);
  json cases = json::parse(in);
  ASSERT_EQ(cases.size(), 10u);
  for (const auto& c : cases) {
    std::string pred = c["pred"], gold = c["gold"];
    EXPECT_NEAR(QaF1(pred, gold), Fraction(c["f1"]), 1e-15) << pred;
    EXPECT_EQ(QaExactMatch(pred, gold), c["em"].get<double>()) << pred;
    Prf prf = EvidencePrf(Units(c["pred_units"]), Units(c["gold_units"]));
    EXPECT_NEAR(prf.precision, Fraction(c["p"]), 1e-15) << pred;
    EXPECT_NEAR(prf.recall, Fraction(c["r"]), 1e-15) << pred;
    EXPECT_NEAR(prf.f1, Fraction(c["evidence_f1"]), 1e-15) << pred;
  }
}

TEST(Metrics, NormalizationIsSymmetric) {
  EXPECT_EQ(NormalizeAnswer("  The  U.S.  Army! "), "us army");
  EXPECT_EQ(QaF1("Korean War", "the Korean War"),
            QaF1("the Korean War", "Korean War"));
}

TEST(ChallengeSet, MatchesStubEnumeration) {
  SyntheticConfig sc;
  sc.n_examples = 60;
  auto dev = testing::MixedEvidenceCorpus(GenerateSynthetic(sc));
  auto got = BuildChallengeSet(dev, testing::StubBaseline);
  auto want = testing::StubChallengeOracle(dev);
  EXPECT_EQ(got, want);
  EXPECT_EQ(got.size(), 40u);
}

TEST(ChallengeSet, AlwaysWrongKeepsEverything) {
  SyntheticConfig sc;
  sc.n_examples = 12;
  auto dev = GenerateSynthetic(sc);
  auto got = BuildChallengeSet(
      dev, [](const MultiHopExample&, const Passage&) { return "nope"; });
  EXPECT_EQ(got.size(), 12u);
}

TEST(ChallengeSet, BetterBaselineGivesSubset) {
  SyntheticConfig sc;
  sc.n_examples = 30;
  auto dev = testing::MixedEvidenceCorpus(GenerateSynthetic(sc));
  auto weak = BuildChallengeSet(dev, testing::StubBaseline);
  auto strong = BuildChallengeSet(
      dev, [](const MultiHopExample& ex, const Passage& p) {
        auto s = FindAnswerSentence(ex);
        return p.IndexOf(*s) >= 0 ? ex.answer.text : "wrong";
      });
  for (const auto& q : strong) EXPECT_TRUE(weak.count(q));
  EXPECT_TRUE(strong.empty());
}

TEST(ConfidenceCurves, ConstantStubIsFlat) {
  SyntheticConfig sc;
  sc.n_examples = 15;
  auto dev = GenerateSynthetic(sc);
  dev[3].gold_evidence.reset();
  auto c = ComputeConfidenceCurves(
      dev, [](const MultiHopExample&, const std::vector<SentenceRef>&) {
        return 0.3;
      });
  EXPECT_EQ(c.plus, c.minus);
  EXPECT_EQ(c.plus.size(), 14u);
  EXPECT_EQ(c.n_skipped, 1);
  EXPECT_DOUBLE_EQ(c.gap(), 0.0);
}

TEST(ConfidenceCurves, SortedWithUnsortedMeans) {
  SyntheticConfig sc;
  sc.n_examples = 20;
  auto dev = GenerateSynthetic(sc);
  auto c = ComputeConfidenceCurves(
      dev, [](const MultiHopExample& ex, const std::vector<SentenceRef>& r) {
        return (ex.qid.size() * 7 % 10) / 10.0 + 0.01 * r.size();
      });
  EXPECT_TRUE(std::is_sorted(c.plus.begin(), c.plus.end()));
  EXPECT_TRUE(std::is_sorted(c.minus.begin(), c.minus.end()));
  double sum = 0;
  for (double v : c.plus) sum += v;
  EXPECT_NEAR(c.mean_plus, sum / c.plus.size(), 1e-12);
  EXPECT_NEAR(c.gap(), 0.01, 1e-12);
  std::string csv = CurvesCsv(c);
  EXPECT_EQ(csv.rfind("index,confidence,set\n", 0), 0u);
  EXPECT_NE(CurvesSvg(c).find("<svg"), std::string::npos);
}

TEST(Evaluate, AggregatesPerExample) {
  auto a = MakeExample("a", "q", "Oslo", {{"x Oslo ."}, {"y ."}}, {0, 1},
                       {{0, 0}, {1, 0}});
  auto b = MakeExample("b", "q", "Rome", {{"x Rome ."}, {"y ."}}, {0, 1},
                       {{0, 0}, {1, 0}});
  PredictionRecord pa;
  pa.qid = "a";
  pa.prediction.answer_text = "Oslo";
  pa.selected_units = {{0, 0}};
  std::set<std::string> challenge = {"a"};
  auto r = Evaluate({a, b}, {pa}, &challenge);
  EXPECT_EQ(r.n_examples, 2);
  EXPECT_EQ(r.n_missing, 1);
  EXPECT_DOUBLE_EQ(r.qa_f1, 0.5);
  EXPECT_DOUBLE_EQ(r.qa_em, 0.5);
  EXPECT_DOUBLE_EQ(r.evidence_prf.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.evidence_prf.recall, 0.5);
  EXPECT_DOUBLE_EQ(*r.challenge_f1, 1.0);
  EXPECT_TRUE(r.challenge_membership.at("a"));
  EXPECT_FALSE(r.challenge_membership.at("b"));
  auto j = ReportToJson(r);
  EXPECT_EQ(j["n_examples"], 2);
  std::string csv = PerExampleCsv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

// Answerability peaks on a chosen pair of pids.
AnswerabilityFn PrefersPids(int x, int y) {
  return [x, y](const Passage& p) {
    std::set<int> pids;
    for (auto r : p.units) pids.insert(r.pid);
    double s = 0.1;
    if (pids.count(x)) s += 0.4;
    if (pids.count(y)) s += 0.4;
    return s;
  };
}

MultiHopExample TenParagraphs() {
  std::vector<std::vector<std::string>> paras;
  for (int p = 0; p < 10; ++p) {
    paras.push_back({"w" + std::to_string(p) + " a .",
                     "w" + std::to_string(p) + " b ."});
  }
  return MakeExample("ten", "q", "w3", paras, {3, 7});
}

TEST(SelectPair, BestPairInPidOrder) {
  auto ex = TenParagraphs();
  auto c = SelectPair(ex, PrefersPids(7, 3));
  EXPECT_EQ(c.first, 3);
  EXPECT_EQ(c.second, 7);
  EXPECT_EQ(c.n_candidates, 45);
  EXPECT_EQ(c.passage.size(), 4);
  EXPECT_EQ(c.passage.units.front().pid, 3);
  // All pairs tie: the smallest wins.
  auto flat = SelectPair(ex, [](const Passage&) { return 0.5; });
  EXPECT_EQ(flat.first, 0);
  EXPECT_EQ(flat.second, 1);
}

TEST(SelectParagraph, BestSingle) {
  auto ex = TenParagraphs();
  auto c = SelectParagraph(ex, PrefersPids(6, 6));
  EXPECT_EQ(c.first, 6);
  EXPECT_EQ(c.passage.size(), 2);
  auto flat = SelectParagraph(ex, [](const Passage&) { return 0.5; });
  EXPECT_EQ(flat.first, 0);
}

TEST(SelectEvidences, TopKInDocumentOrder) {
  SyntheticConfig sc;
  sc.n_examples = 2;
  auto corpus = GenerateSynthetic(sc);
  Vocabulary vocab = Vocabulary::Build(corpus);
  SelectorModel selector(testing::TinyEncoder(vocab.size(), 128), 4);
  auto p = SelectEvidences(selector, vocab, corpus[0], 5, 128);
  ASSERT_EQ(p.size(), 5);
  EXPECT_TRUE(std::is_sorted(p.units.begin(), p.units.end()));
  auto all = SelectEvidences(selector, vocab, corpus[0], 100, 128);
  EXPECT_EQ(all.size(), 40);
  auto ex = MakeExample("s", "q", "a", {{"a .", "b ."}, {"c ."}}, {0, 1});
  EXPECT_EQ(SelectEvidences(selector, vocab, ex, 5, 128).size(), 3);
}

TEST(Selector, OneScorePerUnit) {
  SyntheticConfig sc;
  sc.n_examples = 1;
  auto ex = GenerateSynthetic(sc)[0];
  Vocabulary vocab = Vocabulary::Build({ex});
  SelectorModel selector(testing::TinyEncoder(vocab.size(), 128), 4);
  Passage p = MakePassage(ex, ParagraphUnits(ex, {0, 1}));
  auto s = selector.Score(ex.question, p, vocab, 128);
  ASSERT_EQ(s.size(), 8u);
  for (const auto& v : s) {
    ASSERT_TRUE(v);
    EXPECT_GT(*v, 0.0);
    EXPECT_LT(*v, 1.0);
  }
  auto cut = selector.Score(ex.question, p, vocab, 24);
  EXPECT_FALSE(cut.back());
}

TEST(Selector, LearnsToRankGoldSentences) {
  SyntheticConfig sc;
  sc.n_examples = 120;
  auto corpus = GenerateSynthetic(sc);
  Vocabulary vocab = Vocabulary::Build(corpus);
  std::vector<TrainingInstance> positives;
  std::vector<EvidenceSet> eplus;
  for (const auto& ex : corpus) {
    positives.push_back(BuildAnswerSets(ex, 0, 1).first[0]);
    EvidenceSet e;
    e.qid = ex.qid;
    e.members.assign(ex.gold_evidence->begin(), ex.gold_evidence->end());
    e.scores.assign(e.members.size() - 1, 0.0);
    eplus.push_back(e);
  }
  SelectorConfig cfg;
  cfg.epochs = 4;
  cfg.lr = 3e-3;
  cfg.encoder = testing::TinyEncoder(vocab.size(), 128);
  cfg.encoder.hidden_dim = 16;
  SelectorStats stats;
  auto selector = TrainSelector(positives, eplus, vocab, cfg, &stats);
  EXPECT_EQ(stats.n_passages, 120);
  EXPECT_EQ(stats.n_positive, 240);
  EXPECT_LT(stats.epoch_loss.back(), stats.epoch_loss.front());

  SyntheticConfig dc = sc;
  dc.n_examples = 30;
  dc.seed = 5;
  double gold_rank = 0, other_rank = 0;
  int n_gold = 0, n_other = 0;
  for (const auto& ex : GenerateSynthetic(dc)) {
    auto p = SelectEvidences(selector, vocab, ex, 40, 128);
    std::vector<std::pair<double, SentenceRef>> scored;
    for (const auto& para : ex.paragraphs) {
      Passage pp = MakePassage(ex, ParagraphUnits(ex, {para.pid}));
      auto s = selector.Score(ex.question, pp, vocab, 128);
      for (int u = 0; u < pp.size(); ++u) scored.push_back({-*s[u], pp.units[u]});
    }
    std::sort(scored.begin(), scored.end());
    for (size_t r = 0; r < scored.size(); ++r) {
      if (ex.gold_evidence->count(scored[r].second)) {
        gold_rank += r;
        ++n_gold;
      } else {
        other_rank += r;
        ++n_other;
      }
    }
  }
  EXPECT_LT(gold_rank / n_gold, other_rank / n_other);
}

TEST(Predict, SelectedModeNeedsSelector) {
  auto ex = TenParagraphs();
  Vocabulary vocab = Vocabulary::Build({ex});
  QaModel model(testing::TinyEncoder(vocab.size(), 128), 1);
  PredictOptions opt;
  opt.mode = InferenceMode::kSelectedEvidences;
  EXPECT_THROW(Predict(model, vocab, nullptr, ex, opt), UsageError);
  opt.mode = InferenceMode::kPairedParagraph;
  auto rec = Predict(model, vocab, nullptr, ex, opt);
  EXPECT_EQ(rec.selected_units.size(), 4u);
  opt.mode = InferenceMode::kSingleParagraph;
  EXPECT_EQ(Predict(model, vocab, nullptr, ex, opt).selected_units.size(), 2u);
}

TEST(Predict, ParallelCorpusRunIsOrderedAndRoundTrips) {
  SyntheticConfig sc;
  sc.n_examples = 12;
  auto corpus = GenerateSynthetic(sc);
  Vocabulary vocab = Vocabulary::Build(corpus);
  QaModel model(testing::TinyEncoder(vocab.size(), 128), 1);
  auto before = model.params();
  PredictOptions opt;
  auto recs = PredictAll(model, vocab, nullptr, corpus, opt);
  EXPECT_EQ(model.params(), before);
  ASSERT_EQ(recs.size(), 12u);
  for (size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].qid, corpus[i].qid);
    auto one = Predict(model, vocab, nullptr, corpus[i], opt);
    EXPECT_EQ(PredictionToJson(one), PredictionToJson(recs[i]));
  }
  auto path =
      (std::filesystem::temp_directory_path() / "pseudoev_pred.jsonl").string();
  WritePredictions(path, recs);
  auto back = ReadPredictions(path);
  ASSERT_EQ(back.size(), recs.size());
  EXPECT_EQ(PredictionToJson(back[5]), PredictionToJson(recs[5]));
}

TEST(InferenceMode, ParsesShortNames) {
  EXPECT_EQ(ParseInferenceMode("paired"), InferenceMode::kPairedParagraph);
  EXPECT_EQ(ParseInferenceMode("single_paragraph"),
            InferenceMode::kSingleParagraph);
  EXPECT_THROW(ParseInferenceMode("triple"), UsageError);
}

}  // namespace
}  // namespace pseudoev
