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

// Answer and evidence metrics, challenge-set filtering and confidence
// curves.

#ifndef PSEUDOEV_EVALUATION_H_
#define PSEUDOEV_EVALUATION_H_

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pseudoev/inference.h"
#include "pseudoev/qa_model.h"
#include "pseudoev/tokenizer.h"
#include "pseudoev/types.h"

namespace pseudoev {

// Lowercase, drop punctuation, drop the articles a/an/the, collapse
// whitespace.
std::string NormalizeAnswer(std::string_view s);

// Token-multiset F1 of the normalized strings; exact match for yes/no.
double QaF1(std::string_view pred, std::string_view gold);
double QaExactMatch(std::string_view pred, std::string_view gold);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Empty pred gives (0, 0, 0).
Prf EvidencePrf(const SentenceSet& pred, const SentenceSet& gold);

// Answers `question` of an example from one passage.
using BaselineFn =
    std::function<std::string(const MultiHopExample&, const Passage&)>;

BaselineFn ModelBaseline(const QaModel& model, const Vocabulary& vocab,
                         int budget, int max_span_len);

// qids whose positive paragraphs, each read alone by the baseline, all
// score zero F1.
std::set<std::string> BuildChallengeSet(
    const std::vector<MultiHopExample>& dev, const BaselineFn& baseline);

// Confidence of the gold answer given a subset of an example's sentences.
using SubsetConfidenceFn = std::function<double(
    const MultiHopExample&, const std::vector<SentenceRef>&)>;

SubsetConfidenceFn ModelSubsetConfidence(const QaModel& model,
                                         const Vocabulary& vocab, int budget);

struct ConfidenceCurves {
  std::vector<double> plus;   // gold evidence sentences, ascending
  std::vector<double> minus;  // answer sentence alone, ascending
  double mean_plus = 0.0;
  double mean_minus = 0.0;
  int n_skipped = 0;  // no gold evidence or no answer sentence

  double gap() const { return mean_plus - mean_minus; }
};

ConfidenceCurves ComputeConfidenceCurves(
    const std::vector<MultiHopExample>& dev, const SubsetConfidenceFn& conf);

// index,confidence,set rows.
std::string CurvesCsv(const ConfidenceCurves& c);
std::string CurvesSvg(const ConfidenceCurves& c);
nlohmann::json CurvesSummary(const ConfidenceCurves& c);

struct ExampleScore {
  std::string qid;
  double f1 = 0.0;
  double em = 0.0;
  std::optional<Prf> evidence;
  std::optional<bool> in_challenge;
};

struct EvalReport {
  double qa_f1 = 0.0;
  double qa_em = 0.0;
  Prf evidence_prf;
  int n_examples = 0;
  int n_missing = 0;  // dev examples without a prediction
  std::map<std::string, bool> challenge_membership;
  std::optional<double> challenge_f1;
  std::optional<double> challenge_em;
  std::vector<ExampleScore> per_example;
};

// Evidence scores compare selected_units with gold evidence when known.
EvalReport Evaluate(const std::vector<MultiHopExample>& dev,
                    const std::vector<PredictionRecord>& predictions,
                    const std::set<std::string>* challenge = nullptr);

nlohmann::json ReportToJson(const EvalReport& r);
std::string PerExampleCsv(const EvalReport& r);

}  // namespace pseudoev

#endif  // PSEUDOEV_EVALUATION_H_
