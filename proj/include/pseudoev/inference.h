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

// Test-time passage construction and prediction.
//
//   single_paragraph    the paragraph with the highest 1 - p_none
//   paired_paragraph    the pair (i < j) with the highest 1 - p_none
//   selected_evidences  the global top-k sentences of the selector

#ifndef PSEUDOEV_INFERENCE_H_
#define PSEUDOEV_INFERENCE_H_

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pseudoev/qa_model.h"
#include "pseudoev/selector.h"
#include "pseudoev/tokenizer.h"
#include "pseudoev/types.h"

namespace pseudoev {

enum class InferenceMode { kSingleParagraph, kPairedParagraph,
                           kSelectedEvidences };

std::string_view ToString(InferenceMode m);
InferenceMode ParseInferenceMode(std::string_view s);

// 1 - p_none of a passage.
using AnswerabilityFn = std::function<double(const Passage&)>;

AnswerabilityFn ModelAnswerability(const QaModel& model,
                                   const Vocabulary& vocab,
                                   std::string question, int budget);

struct PairChoice {
  int first = 0;   // pids, first < second
  int second = 1;
  double score = 0.0;
  int n_candidates = 0;
  Passage passage;
};

// Scores every unordered pair of paragraphs (ascending pid inside a pair);
// ties go to the smaller (i, j).
PairChoice SelectPair(const MultiHopExample& ex, const AnswerabilityFn& score);

// The single paragraph with the highest score; ties to the smaller pid.
PairChoice SelectParagraph(const MultiHopExample& ex,
                           const AnswerabilityFn& score);

// Scores each paragraph in its own pass, keeps the global top k (ties to
// the smaller (pid, sid)) and returns them in (pid, sid) order.
Passage SelectEvidences(const SelectorModel& selector, const Vocabulary& vocab,
                        const MultiHopExample& ex, int k, int budget);

struct PredictOptions {
  InferenceMode mode = InferenceMode::kPairedParagraph;
  int token_budget = 128;
  int max_span_len = 30;
  int top_k = 5;
};

struct PredictionRecord {
  std::string qid;
  Prediction prediction;
  InferenceMode mode = InferenceMode::kPairedParagraph;
  std::vector<SentenceRef> selected_units;
};

// Throws UsageError if the mode needs a selector and none is given.
PredictionRecord Predict(const QaModel& model, const Vocabulary& vocab,
                         const SelectorModel* selector,
                         const MultiHopExample& ex, const PredictOptions& opt);

// Runs the model on a fixed passage.
Prediction PredictOnPassage(const QaModel& model, const Vocabulary& vocab,
                            std::string_view question, const Passage& passage,
                            int budget, int max_span_len);

// Over a corpus, in corpus order.
std::vector<PredictionRecord> PredictAll(
    const QaModel& model, const Vocabulary& vocab,
    const SelectorModel* selector,
    const std::vector<MultiHopExample>& examples, const PredictOptions& opt);

nlohmann::json PredictionToJson(const PredictionRecord& r);
PredictionRecord PredictionFromJson(const nlohmann::json& j);
void WritePredictions(const std::string& path,
                      const std::vector<PredictionRecord>& records);
std::vector<PredictionRecord> ReadPredictions(const std::string& path);

}  // namespace pseudoev

#endif  // PSEUDOEV_INFERENCE_H_
