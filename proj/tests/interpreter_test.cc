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
#include <random>

#include "gtest/gtest.h"
#include "pseudoev/interpreter.h"
#include "pseudoev/setgen.h"
#include "pseudoev/synthetic.h"
#include "test_util.h"

namespace pseudoev {
namespace {

using testing::UnitInstance;

// Units: S* = (0,0), s1 = (0,1), s2 = (0,2), s3 = (0,3).
constexpr SentenceRef kStar{0, 0}, kS1{0, 1}, kS2{0, 2}, kS3{0, 3};

TEST(StepScores, CombinedStub) {
  StubConfidence stub({kS1, kS2});
  auto scores = StepScores(stub, UnitInstance("q", 4), {kStar},
                           Strategy::kCombined);
  ASSERT_EQ(scores.size(), 3u);
  EXPECT_DOUBLE_EQ(scores[kS1], 0.0);
  EXPECT_DOUBLE_EQ(scores[kS2], 0.0);
  EXPECT_DOUBLE_EQ(scores[kS3], -1.0);
}

TEST(StepScores, AccumulativeStub) {
  StubConfidence stub({kS1, kS2});
  auto scores = StepScores(stub, UnitInstance("q", 4), {kStar},
                           Strategy::kAccumulative);
  EXPECT_DOUBLE_EQ(scores[kS1], 0.5);
  EXPECT_DOUBLE_EQ(scores[kS2], 0.5);
  EXPECT_DOUBLE_EQ(scores[kS3], 0.0);
}

TEST(Extract, CombinedTraceOfStub) {
  StubConfidence stub({kS1, kS2});
  InterpreterConfig cfg;
  auto e = Extract(stub, UnitInstance("q", 4), cfg);
  // Tie at step one goes to s1; s2 completes the gold set at step two.
  ASSERT_GE(e.members.size(), 3u);
  EXPECT_EQ(e.members[0], kStar);
  EXPECT_EQ(e.members[1], kS1);
  EXPECT_EQ(e.members[2], kS2);
  EXPECT_EQ(e.scores[0], 0.0);
  EXPECT_EQ(e.scores[1], 1.0);
}

TEST(Extract, StopsAtTPlusOneMembers) {
  StubConfidence stub({kS1, kS2});
  InterpreterConfig cfg;
  cfg.strategy = Strategy::kAccumulative;
  cfg.T = 2;
  auto inst = UnitInstance("q", 8);
  auto e = Extract(stub, inst, cfg);
  EXPECT_EQ(e.members.size(), 3u);
  EXPECT_EQ(e.stopped_by, StopReason::kMaxSteps);
}

TEST(Extract, StopsOnNegativeGain) {
  // Whatever is added, the complement keeps more gold.
  StubConfidence stub({kS1, kS2, kS3});
  auto e = Extract(stub, UnitInstance("q", 4), InterpreterConfig{});
  EXPECT_EQ(e.members, std::vector<SentenceRef>{kStar});
  EXPECT_EQ(e.stopped_by, StopReason::kNegativeGain);
  EXPECT_TRUE(e.scores.empty());
}

TEST(Extract, ExhaustedWhenEverythingIsTaken) {
  StubConfidence stub({kS1});
  InterpreterConfig cfg;
  cfg.strategy = Strategy::kAccumulative;
  auto e = Extract(stub, UnitInstance("q", 3), cfg);
  EXPECT_EQ(e.members.size(), 3u);
  EXPECT_EQ(e.stopped_by, StopReason::kExhausted);
}

TEST(Extract, MissingAnchorIsDataError) {
  auto inst = UnitInstance("q", 3);
  inst.anchor.reset();
  EXPECT_THROW(Extract(StubConfidence({kS1}), inst, {}), DataError);
  inst.anchor = SentenceRef{5, 5};
  EXPECT_THROW(Extract(StubConfidence({kS1}), inst, {}), DataError);
}

// Deterministic pseudo-random confidences; some masks are unlocatable.
class HashedConfidence : public ConfidenceOracle {
 public:
  explicit HashedConfidence(uint64_t salt) : salt_(salt) {}
  std::optional<double> Confidence(
      const TrainingInstance& inst,
      const std::vector<char>& keep) const override {
    uint64_t h = salt_ ^ ExampleSeed(0, inst.qid);
    for (char k : keep) h = (h ^ static_cast<uint64_t>(k)) * 1099511628211ull;
    std::mt19937_64 rng(h);
    if (rng() % 7 == 0) return std::nullopt;
    // Coarse grid so exact ties happen.
    return static_cast<double>(rng() % 5) / 4.0;
  }

 private:
  uint64_t salt_;
};

TEST(BruteForce, AgreesWithGreedyOnRandomOracles) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + static_cast<int>(rng() % kBruteForceMaxUnits);
    auto inst = UnitInstance("r" + std::to_string(i), n);
    HashedConfidence oracle(rng());
    for (auto strategy : {Strategy::kCombined, Strategy::kAccumulative}) {
      InterpreterConfig cfg{strategy, 1 + static_cast<int>(rng() % 6)};
      auto a = Extract(oracle, inst, cfg);
      auto b = BruteForceExtract(oracle, inst, cfg);
      EXPECT_EQ(a.members, b.members) << i;
      EXPECT_EQ(a.scores, b.scores) << i;
      EXPECT_EQ(a.stopped_by, b.stopped_by) << i;
    }
  }
}

TEST(BruteForce, RejectsLargePassages) {
  EXPECT_THROW(BruteForceExtract(StubConfidence({kS1}), UnitInstance("q", 9),
                                 {}),
               UsageError);
}

TEST(Extract, UnlocatableSubPassagesAreCounted) {
  HashedConfidence oracle(99);
  InterpreterStats stats;
  for (int i = 0; i < 20; ++i) {
    Extract(oracle, UnitInstance("u" + std::to_string(i), 6), {}, &stats);
  }
  EXPECT_GT(stats.n_unlocatable, 0);
  EXPECT_GT(stats.n_evaluations, stats.n_unlocatable);
}

TEST(EvidenceRecallPrecision, DirectFormula) {
  EvidenceSet e{"q", {{0, 0}, {0, 1}, {1, 0}}, {0.1, 0.2}, StopReason::kMaxSteps};
  auto [p, r] = EvidenceRecallPrecision(e, {{0, 0}, {0, 1}});
  EXPECT_DOUBLE_EQ(p, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r, 1.0);
}

TEST(ExtractAll, ParallelMatchesSerial) {
  std::vector<TrainingInstance> inst;
  for (int i = 0; i < 64; ++i) {
    inst.push_back(UnitInstance("p" + std::to_string(i), 2 + i % 10));
  }
  inst[7].anchor.reset();
  HashedConfidence oracle(3);
  InterpreterStats sa, sb;
  auto a = ExtractAll(oracle, inst, {}, &sa);
  auto b = ExtractAllSerial(oracle, inst, {}, &sb);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_FALSE(a[7]);
  for (size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].has_value(), b[i].has_value());
    if (a[i]) EXPECT_EQ(EvidenceSetToJson(*a[i]), EvidenceSetToJson(*b[i]));
  }
  EXPECT_EQ(sa.n_failed, 1);
  EXPECT_EQ(sa.n_failed, sb.n_failed);
  EXPECT_EQ(sa.n_extracted, sb.n_extracted);
  EXPECT_EQ(sa.n_unlocatable, sb.n_unlocatable);
}

TEST(SubPassage, KeepsOrder) {
  SyntheticConfig sc;
  sc.n_examples = 1;
  auto ex = GenerateSynthetic(sc)[0];
  auto ap = BuildAnswerSets(ex, 0, 1).first[0];
  std::vector<char> keep(ap.passage.size(), 0);
  keep[1] = keep[5] = 1;
  Passage sub = SubPassage(ap.passage, keep);
  ASSERT_EQ(sub.size(), 2);
  EXPECT_EQ(sub.units[0], ap.passage.units[1]);
  EXPECT_EQ(sub.units[1], ap.passage.units[5]);
  EXPECT_EQ(sub.UnitText(1), ap.passage.UnitText(5));
}

TEST(EvidencePositive, RestrictsThePassage) {
  SyntheticConfig sc;
  sc.n_examples = 1;
  auto ex = GenerateSynthetic(sc)[0];
  auto ap = BuildAnswerSets(ex, 0, 1).first[0];
  EvidenceSet e{ex.qid, {*ap.anchor, ap.passage.units[0]}, {0.3},
                StopReason::kNegativeGain};
  auto ep = MakeEvidencePositive(ap, e);
  ASSERT_TRUE(ep);
  EXPECT_EQ(ep->set, InstanceSet::kEvidencePositive);
  EXPECT_EQ(ep->evidentiality, Evidentiality::kPositive);
  EXPECT_EQ(ep->passage.size(), 2);
  EXPECT_TRUE(ep->answer_span);
}

TEST(EvidenceSets, FileRoundTrip) {
  std::vector<EvidenceSet> sets = {
      {"a", {{1, 0}, {0, 2}}, {0.25}, StopReason::kNegativeGain},
      {"b", {{3, 1}}, {}, StopReason::kExhausted}};
  auto path =
      (std::filesystem::temp_directory_path() / "pseudoev_eplus.jsonl").string();
  WriteEvidenceSets(path, sets);
  auto back = ReadEvidenceSets(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].members, sets[0].members);
  EXPECT_EQ(back[0].scores, sets[0].scores);
  EXPECT_EQ(back[1].stopped_by, StopReason::kExhausted);
}

}  // namespace
}  // namespace pseudoev
