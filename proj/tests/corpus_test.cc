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

#include "gtest/gtest.h"
#include "pseudoev/corpus.h"
#include "pseudoev/synthetic.h"
#include "pseudoev/tokenizer.h"
#include "test_util.h"

namespace pseudoev {
namespace {

using nlohmann::json;
using testing::MakeExample;

TEST(LocateAnswer, HandCountedOffsets) {
  auto ex = MakeExample("q", "when?", "1945",
                        {{"Korea got independence in 1945."}, {"x ."}}, {0, 1});
  Passage p = MakePassage(ex, {{0, 0}});
  auto span = LocateAnswer(p, ex.answer);
  ASSERT_TRUE(span);
  EXPECT_EQ(span->begin, 26);
  EXPECT_EQ(span->end, 30);
}

TEST(LocateAnswer, AnchorOccurrenceWins) {
  auto ex = MakeExample("q", "q", "Seoul",
                        {{"Seoul is big .", "Kim lives in Seoul ."}, {"y ."}},
                        {0, 1});
  Passage p = MakePassage(ex, ParagraphUnits(ex, {0}));
  EXPECT_EQ(LocateAnswer(p, ex.answer)->begin, 0);
  auto anchored = LocateAnswer(p, ex.answer, SentenceRef{0, 1});
  ASSERT_TRUE(anchored);
  EXPECT_EQ(p.UnitAt(anchored->begin), 1);
  EXPECT_EQ(p.resolved_text.substr(anchored->begin, 5), "Seoul");
}

TEST(LocateAnswer, NotFound) {
  auto ex = MakeExample("q", "q", "Busan", {{"Seoul is big ."}, {"y ."}},
                        {0, 1});
  EXPECT_FALSE(LocateAnswer(MakePassage(ex, {{0, 0}}), ex.answer));
}

TEST(Passage, BoundariesAndUnits) {
  auto ex = MakeExample("q", "q", "b", {{"a a .", "b ."}, {"c ."}}, {0, 1});
  Passage p = MakePassage(ex, {{0, 0}, {0, 1}, {1, 0}});
  EXPECT_EQ(p.resolved_text, "a a . b . c .");
  EXPECT_EQ(p.UnitText(1), "b .");
  EXPECT_EQ(p.UnitAt(6), 1);
  EXPECT_EQ(p.IndexOf({1, 0}), 2);
  EXPECT_EQ(p.IndexOf({1, 1}), -1);
}

TEST(Corpus, JsonRoundTrip) {
  auto ex = MakeExample("q7", "who?", "Kim",
                        {{"Kim ran .", "x ."}, {"y ."}, {"z ."}}, {0, 1},
                        {{0, 0}, {1, 0}});
  auto back = ExampleFromJson(ExampleToJson(ex));
  EXPECT_EQ(ExampleToJson(back), ExampleToJson(ex));
  EXPECT_EQ(back.PositivePids(), (std::vector<int>{0, 1}));
  EXPECT_EQ(back.NegativePids(), (std::vector<int>{2}));
}

json DistractorRecord(const std::string& id, int n_context, int n_pos,
                      const std::string& answer) {
  json ctx = json::array();
  json facts = json::array();
  for (int i = 0; i < n_context; ++i) {
    std::string title = "T" + std::to_string(i);
    ctx.push_back({title, {"Bora lives in Oslo .", "Nothing else ."}});
    if (i < n_pos) facts.push_back({title, 0});
  }
  return {{"_id", id}, {"question", "where?"}, {"answer", answer},
          {"context", ctx}, {"supporting_facts", facts}};
}

TEST(Corpus, DistractorSkipsAreCounted) {
  json records = json::array({DistractorRecord("ok", 10, 2, "Oslo"),
                              DistractorRecord("short", 9, 2, "Oslo"),
                              DistractorRecord("onepos", 10, 1, "Oslo"),
                              DistractorRecord("absent", 10, 2, "Rome"),
                              DistractorRecord("yes", 10, 2, "yes")});
  LoadStats st;
  auto out = ParseDistractorJson(records, &st);
  EXPECT_EQ(st.n_records, 5);
  EXPECT_EQ(st.n_loaded, 2);
  EXPECT_EQ(st.n_skipped_paragraph_count, 1);
  EXPECT_EQ(st.n_skipped_positive_count, 1);
  EXPECT_EQ(st.n_skipped_answer_missing, 1);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].qid, "ok");
  EXPECT_EQ(out[1].answer.type, AnswerType::kYes);
  EXPECT_EQ(*out[0].gold_evidence, (SentenceSet{{0, 0}, {1, 0}}));
}

TEST(Corpus, MalformedRecordNamesQid) {
  json bad = json::array({{{"_id", "broken"}, {"question", "q"}}});
  try {
    ParseDistractorJson(bad);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("broken"), std::string::npos);
  }
}

TEST(Synthetic, DeterministicAndWellFormed) {
  SyntheticConfig cfg;
  cfg.n_examples = 50;
  auto a = GenerateSynthetic(cfg);
  auto b = GenerateSynthetic(cfg);
  ASSERT_EQ(a.size(), 50u);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(ExampleToJson(a[i]), ExampleToJson(b[i]));
    EXPECT_NO_THROW(ValidateExample(a[i]));
    ASSERT_TRUE(a[i].gold_evidence);
    EXPECT_EQ(a[i].gold_evidence->size(), 2u);
    std::set<int> pids;
    for (auto r : *a[i].gold_evidence) pids.insert(r.pid);
    EXPECT_EQ(pids.size(), 2u);
    auto s_star = FindAnswerSentence(a[i]);
    ASSERT_TRUE(s_star);
    EXPECT_TRUE(a[i].gold_evidence->count(*s_star));
  }
  cfg.seed = 7;
  EXPECT_NE(ExampleToJson(GenerateSynthetic(cfg)[0]), ExampleToJson(a[0]));
}

TEST(Synthetic, InvalidConfigIsUsageError) {
  SyntheticConfig cfg;
  cfg.chain_length = 20;
  EXPECT_THROW(GenerateSynthetic(cfg), UsageError);
}

TEST(Corpus, FileRoundTrip) {
  SyntheticConfig cfg;
  cfg.n_examples = 5;
  auto ex = GenerateSynthetic(cfg);
  auto path = (std::filesystem::temp_directory_path() / "pseudoev_corpus.jsonl")
                  .string();
  WriteCorpus(path, ex);
  auto back = ReadCorpus(path);
  ASSERT_EQ(back.size(), ex.size());
  EXPECT_EQ(ExampleToJson(back[4]), ExampleToJson(ex[4]));
  EXPECT_THROW(ReadCorpus(path + ".missing"), DataError);
}

TEST(Tokenizer, SpanMappingAndTruncation) {
  auto ex = MakeExample("q", "where does kim live ?", "Oslo",
                        {{"Kim lives in Oslo .", "Kim is tall ."}, {"x ."}},
                        {0, 1});
  Vocabulary vocab = Vocabulary::Build({ex});
  Passage p = MakePassage(ex, ParagraphUnits(ex, {0}));
  auto enc = Tokenize(ex.question, p, vocab, 64);
  EXPECT_EQ(enc.ids.front(), Vocabulary::kCls);
  EXPECT_EQ(enc.ids[enc.passage_end], Vocabulary::kEos);
  auto span = enc.MapSpan(*LocateAnswer(p, ex.answer));
  ASSERT_TRUE(span);
  EXPECT_EQ(span->first, span->second);
  EXPECT_EQ(vocab.Token(enc.ids[span->first]), "oslo");
  CharSpan back = enc.CharsOf(span->first, span->second);
  EXPECT_EQ(p.resolved_text.substr(back.begin, back.end - back.begin), "Oslo");

  // question (5) + CLS/SEP/EOS leaves 3 passage tokens.
  auto cut = Tokenize(ex.question, p, vocab, 11);
  EXPECT_EQ(cut.size(), 11);
  EXPECT_GT(cut.n_truncated, 0);
  EXPECT_FALSE(cut.MapSpan(*LocateAnswer(p, ex.answer)));
  EXPECT_THROW(Tokenize(ex.question, p, vocab, 7), UsageError);
}

TEST(Tokenizer, MarkersFollowEverySentence) {
  auto ex = MakeExample("q", "q", "b", {{"a .", "b .", "c ."}, {"d ."}}, {0, 1});
  Vocabulary vocab = Vocabulary::Build({ex});
  auto enc = Tokenize("q", MakePassage(ex, ParagraphUnits(ex, {0})), vocab,
                      64, true);
  ASSERT_EQ(enc.marker_positions.size(), 3u);
  for (int m : enc.marker_positions) {
    EXPECT_EQ(enc.ids[m], Vocabulary::kSentenceMarker);
  }
}

TEST(Vocabulary, SortedAndStable) {
  auto ex = MakeExample("q", "b a", "c", {{"c b ."}, {"a ."}}, {0, 1});
  Vocabulary v = Vocabulary::Build({ex});
  EXPECT_LT(v.Id("a"), v.Id("b"));
  EXPECT_EQ(v.Id("never"), Vocabulary::kUnk);
  EXPECT_EQ(Vocabulary::FromTokens(v.tokens()).tokens(), v.tokens());
}

}  // namespace
}  // namespace pseudoev
