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


// Small hand-built fixtures shared by the unit and acceptance tests.

#ifndef PSEUDOEV_TESTS_TEST_UTIL_H_
#define PSEUDOEV_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "pseudoev/corpus.h"
#include "pseudoev/encoder.h"
#include "pseudoev/tokenizer.h"
#include "pseudoev/qa_model.h"
#include "pseudoev/setgen.h"
#include "pseudoev/types.h"

namespace pseudoev::testing {

// Paragraph pid = index; `positive` lists the positive pids.
inline MultiHopExample MakeExample(
    const std::string& qid, const std::string& question,
    const std::string& answer,
    const std::vector<std::vector<std::string>>& paragraphs,
    const std::vector<int>& positive, SentenceSet gold = {}) {
  MultiHopExample ex;
  ex.qid = qid;
  ex.question = question;
  ex.answer.text = answer;
  if (answer == "yes") ex.answer.type = AnswerType::kYes;
  if (answer == "no") ex.answer.type = AnswerType::kNo;
  for (int p = 0; p < static_cast<int>(paragraphs.size()); ++p) {
    Paragraph para;
    para.pid = p;
    para.title = "t" + std::to_string(p);
    for (int s = 0; s < static_cast<int>(paragraphs[p].size()); ++s) {
      para.sentences.push_back({s, paragraphs[p][s]});
    }
    para.polarity = Polarity::kNegative;
    for (int q : positive) {
      if (q == p) para.polarity = Polarity::kPositive;
    }
    ex.paragraphs.push_back(para);
  }
  if (!gold.empty()) ex.gold_evidence = std::move(gold);
  return ex;
}

inline EncoderConfig TinyEncoder(int vocab_size, int max_len = 32) {
  EncoderConfig c;
  c.layers = 1;
  c.hidden_dim = 8;
  c.heads = 2;
  c.ffn_dim = 12;
  c.vocab_size = vocab_size;
  c.max_len = max_len;
  return c;
}

// A passage-only instance over `n` single-sentence units, S* first.
inline TrainingInstance UnitInstance(const std::string& qid, int n) {
  TrainingInstance inst;
  inst.qid = qid;
  inst.question = "q";
  inst.answer.text = "x";
  for (int k = 0; k < n; ++k) inst.passage.units.push_back({k / 4, k % 4});
  inst.anchor = inst.passage.units[0];
  return inst;
}

// Synthetic examples where every third one is answerable from its answer
// sentence alone (gold evidence = {S*}).
inline std::vector<MultiHopExample> MixedEvidenceCorpus(
    std::vector<MultiHopExample> corpus) {
  for (size_t i = 0; i < corpus.size(); i += 3) {
    auto s_star = FindAnswerSentence(corpus[i]);
    if (s_star) corpus[i].gold_evidence = SentenceSet{*s_star};
  }
  return corpus;
}

// Answers correctly iff the passage holds every gold evidence sentence.
inline std::string StubBaseline(const MultiHopExample& ex, const Passage& p) {
  for (auto r : *ex.gold_evidence) {
    if (p.IndexOf(r) < 0) return "wrong";
  }
  return ex.answer.text;
}

// Enumerated directly: gold evidence spanning more than one paragraph.
inline std::set<std::string> StubChallengeOracle(
    const std::vector<MultiHopExample>& corpus) {
  std::set<std::string> out;
  for (const auto& ex : corpus) {
    std::set<int> pids;
    for (auto r : *ex.gold_evidence) pids.insert(r.pid);
    if (pids.size() > 1) out.insert(ex.qid);
  }
  return out;
}

// [CLS] w [SEP] w w w [EOS] over a vocabulary of `vocab_size` ids.
inline std::vector<int> ToyTokens(int n_passage, int first_word = 6) {
  std::vector<int> t = {Vocabulary::kCls, first_word, Vocabulary::kSep};
  for (int k = 0; k < n_passage; ++k) t.push_back(first_word + 1 + k);
  t.push_back(Vocabulary::kEos);
  return t;
}

// Central differences of `loss` at params[i] for each i in `indices`.
inline std::vector<double> NumericGradient(
    std::vector<double>* params, const std::function<double()>& loss,
    const std::vector<size_t>& indices, double h = 1e-5) {
  std::vector<double> out;
  for (size_t i : indices) {
    const double keep = (*params)[i];
    (*params)[i] = keep + h;
    const double up = loss();
    (*params)[i] = keep - h;
    const double down = loss();
    (*params)[i] = keep;
    out.push_back((up - down) / (2.0 * h));
  }
  return out;
}

inline std::vector<size_t> Indices(
    const std::vector<std::pair<size_t, size_t>>& ranges) {
  std::vector<size_t> out;
  for (auto [begin, end] : ranges) {
    for (size_t i = begin; i < end; ++i) out.push_back(i);
  }
  return out;
}

// |a - n| / max(|a|, |n|), with both below `floor` counted as agreeing.
inline double RelativeError(double a, double n, double floor = 1e-7) {
  double scale = std::max(std::abs(a), std::abs(n));
  if (scale < floor) return 0.0;
  return std::abs(a - n) / scale;
}

}  // namespace pseudoev::testing

#endif  // PSEUDOEV_TESTS_TEST_UTIL_H_
