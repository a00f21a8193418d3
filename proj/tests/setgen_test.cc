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
#include <map>

#include "gtest/gtest.h"
#include "pseudoev/corpus.h"
#include "pseudoev/setgen.h"
#include "pseudoev/synthetic.h"

namespace pseudoev {
namespace {

std::vector<MultiHopExample> Corpus(int n, uint64_t seed = 42) {
  SyntheticConfig cfg;
  cfg.n_examples = n;
  cfg.seed = seed;
  return GenerateSynthetic(cfg);
}

TEST(AnswerSets, OnePositiveTwoNegatives) {
  auto ex = Corpus(1)[0];
  SetGenStats st;
  auto [pos, neg] = BuildAnswerSets(ex, 2, 42, &st);
  ASSERT_EQ(pos.size(), 1u);
  ASSERT_EQ(neg.size(), 2u);
  EXPECT_EQ(pos[0].class_label, AnswerClass::kSpan);
  ASSERT_TRUE(pos[0].answer_span);
  // Positive pair in ascending pid order.
  auto pids = ex.PositivePids();
  EXPECT_EQ(pos[0].passage.units.front().pid, pids[0]);
  EXPECT_EQ(pos[0].passage.units.back().pid, pids[1]);
  for (const auto& n : neg) {
    EXPECT_EQ(n.class_label, AnswerClass::kNone);
    EXPECT_EQ(n.answerability, Answerability::kUnanswerable);
    EXPECT_FALSE(n.answer_span);
    std::set<int> used;
    for (auto r : n.passage.units) used.insert(r.pid);
    EXPECT_EQ(used.size(), 2u);
    for (int p : used) {
      EXPECT_EQ(ex.paragraphs[p].polarity, Polarity::kNegative);
    }
  }
  EXPECT_NE(neg[0].passage.units, neg[1].passage.units);
  EXPECT_EQ(st.n_neg_capped, 0);
}

TEST(AnswerSets, NegativePairsCapAt28) {
  auto ex = Corpus(1)[0];
  SetGenStats st;
  auto neg = BuildAnswerSets(ex, 40, 42, &st).second;
  EXPECT_EQ(neg.size(), 28u);
  EXPECT_EQ(st.n_neg_capped, 1);
  std::set<std::vector<SentenceRef>> distinct;
  for (const auto& n : neg) distinct.insert(n.passage.units);
  EXPECT_EQ(distinct.size(), 28u);
}

TEST(EvidenceNegatives, ThreeTypesMissGoldEvidence) {
  for (const auto& ex : Corpus(100)) {
    auto en = BuildEvidenceNegatives(ex, 42);
    ASSERT_EQ(en.size(), 3u);
    auto s_star = FindAnswerSentence(ex);
    ASSERT_TRUE(s_star);
    EXPECT_EQ(en[0].neg_type, NegativeType::kAnswerOnly);
    EXPECT_EQ(en[0].passage.units, std::vector<SentenceRef>{*s_star});
    EXPECT_EQ(en[1].neg_type, NegativeType::kAnswerPlusIrrelevant);
    EXPECT_EQ(en[2].neg_type, NegativeType::kPartialPlusIrrelevant);
    for (const auto& inst : en) {
      EXPECT_EQ(inst.set, InstanceSet::kEvidenceNegative);
      EXPECT_EQ(inst.evidentiality, Evidentiality::kNegative);
      EXPECT_TRUE(inst.answer_span);
      EXPECT_EQ(inst.anchor, s_star);
      int missing = 0;
      for (auto g : *ex.gold_evidence) missing += inst.passage.IndexOf(g) < 0;
      EXPECT_GE(missing, 1);
    }
  }
}

TEST(Audit, SyntheticCorpusIsClean) {
  auto corpus = Corpus(200);
  auto instances = BuildTrainingSets(corpus, 2, 42);
  std::map<std::string, std::vector<TrainingInstance>> by_qid;
  for (auto& inst : instances) by_qid[inst.qid].push_back(inst);
  int checked = 0;
  for (const auto& ex : corpus) {
    auto audit = AuditLabels(by_qid[ex.qid], ex);
    EXPECT_EQ(audit.n_violations, 0) << ex.qid;
    checked += audit.n_checked;
  }
  EXPECT_EQ(checked, 200 * 6);
}

TEST(Audit, CatchesBadLabels) {
  auto ex = Corpus(1)[0];
  auto [pos, neg] = BuildAnswerSets(ex, 1, 42);
  auto en = BuildEvidenceNegatives(ex, 42);
  // A+ passage handed to E-: contains every gold sentence.
  TrainingInstance bad = pos[0];
  bad.set = InstanceSet::kEvidenceNegative;
  // A- passage claiming a gold sentence.
  TrainingInstance bad_neg = neg[0];
  bad_neg.passage = pos[0].passage;
  auto audit = AuditLabels({bad, bad_neg, en[0]}, ex);
  EXPECT_EQ(audit.n_checked, 3);
  EXPECT_EQ(audit.n_violations, 2);
}

TEST(SetGen, DeterministicUnderSeedAndOrder) {
  auto corpus = Corpus(20);
  auto a = BuildTrainingSets(corpus, 2, 42);
  std::vector<MultiHopExample> reversed(corpus.rbegin(), corpus.rend());
  auto b = BuildTrainingSets(reversed, 2, 42);
  std::map<std::string, std::vector<nlohmann::json>> ja, jb;
  for (const auto& i : a) ja[i.qid].push_back(InstanceToJson(i));
  for (const auto& i : b) jb[i.qid].push_back(InstanceToJson(i));
  EXPECT_EQ(ja, jb);
}

TEST(SetGen, SingleParagraphRecipe) {
  auto corpus = Corpus(10);
  auto out = BuildSingleParagraphInstances(corpus, 2, 42);
  ASSERT_EQ(out.size(), 40u);
  int answerable = 0;
  for (const auto& inst : out) {
    std::set<int> pids;
    for (auto r : inst.passage.units) pids.insert(r.pid);
    EXPECT_EQ(pids.size(), 1u);
    answerable += inst.set == InstanceSet::kAnswerPositive;
  }
  // The answer sits in exactly one positive paragraph.
  EXPECT_EQ(answerable, 10);
}

TEST(SetGen, InstanceFileRoundTrip) {
  auto inst = BuildTrainingSets(Corpus(3), 2, 42);
  auto path =
      (std::filesystem::temp_directory_path() / "pseudoev_sets.jsonl").string();
  WriteInstances(path, inst);
  auto back = ReadInstances(path);
  ASSERT_EQ(back.size(), inst.size());
  for (size_t i = 0; i < inst.size(); ++i) {
    EXPECT_EQ(InstanceToJson(back[i]), InstanceToJson(inst[i]));
  }
}

}  // namespace
}  // namespace pseudoev
