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

// Answerability and evidentiality training sets.
//
//   A+  the two positive paragraphs concatenated (answerable, evidential)
//   A-  two negative paragraphs (no answer, no evidence)
//   E-  the answer is present but part of the evidence chain is not:
//         answer_only              the answer sentence alone
//         answer_plus_irrelevant   answer sentence + one negative paragraph
//         partial_plus_irrelevant  the answer's positive paragraph + one
//                                  negative paragraph
//   E+  added later from interpreter output

#ifndef PSEUDOEV_SETGEN_H_
#define PSEUDOEV_SETGEN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pseudoev/types.h"

namespace pseudoev {

enum class InstanceSet {
  kAnswerPositive,
  kAnswerNegative,
  kEvidenceNegative,
  kEvidencePositive
};
enum class Answerability { kAnswerable, kUnanswerable };
enum class Evidentiality { kPositive, kNegative, kUnknown };
enum class NegativeType {
  kAnswerOnly,
  kAnswerPlusIrrelevant,
  kPartialPlusIrrelevant
};

std::string_view ToString(InstanceSet s);  // "A+", "A-", "E-", "E+"
std::string_view ToString(NegativeType t);
InstanceSet ParseInstanceSet(std::string_view s);

struct TrainingInstance {
  std::string qid;
  std::string question;
  Answer answer;
  Passage passage;
  InstanceSet set = InstanceSet::kAnswerPositive;
  Answerability answerability = Answerability::kAnswerable;
  Evidentiality evidentiality = Evidentiality::kUnknown;
  std::optional<NegativeType> neg_type;
  std::optional<CharSpan> answer_span;
  AnswerClass class_label = AnswerClass::kSpan;
  // The answer sentence when it is part of the passage.
  std::optional<SentenceRef> anchor;
};

struct SetGenStats {
  int n_neg_capped = 0;          // k_neg above the number of negative pairs
  int n_missing_answer_sentence = 0;
  int n_unlocatable_span = 0;
};

struct LabelAudit {
  int n_checked = 0;
  int n_violations = 0;
  std::vector<std::pair<std::string, std::string>> violations;  // (qid, rule)
};

// Per-example sampling stream, stable under reordering of the corpus.
uint64_t ExampleSeed(uint64_t seed, const std::string& qid);

// One A+ instance and min(k_neg, #negative pairs) A- instances.
std::pair<std::vector<TrainingInstance>, std::vector<TrainingInstance>>
BuildAnswerSets(const MultiHopExample& ex, int k_neg, uint64_t seed,
                SetGenStats* stats = nullptr);

// One instance per negative type; only the partial+irrelevant instance when
// the answer sentence cannot be identified.
std::vector<TrainingInstance> BuildEvidenceNegatives(
    const MultiHopExample& ex, uint64_t seed, SetGenStats* stats = nullptr);

// A+, A- and E- for every example, in corpus order.
std::vector<TrainingInstance> BuildTrainingSets(
    const std::vector<MultiHopExample>& examples, int k_neg, uint64_t seed,
    SetGenStats* stats = nullptr);

// Single-paragraph recipe: each positive paragraph alone (answerable iff it
// contains the answer) plus k_neg sampled negative paragraphs, all tagged
// A+ or A-.
std::vector<TrainingInstance> BuildSingleParagraphInstances(
    const std::vector<MultiHopExample>& examples, int k_neg, uint64_t seed,
    SetGenStats* stats = nullptr);

// Checks E-: answer present and gold evidence not contained; A-: neither
// answer nor any gold sentence; A+: all gold sentences present.
LabelAudit AuditLabels(const std::vector<TrainingInstance>& instances,
                       const MultiHopExample& gt);

nlohmann::json InstanceToJson(const TrainingInstance& inst);
TrainingInstance InstanceFromJson(const nlohmann::json& j);
void WriteInstances(const std::string& path,
                    const std::vector<TrainingInstance>& instances);
std::vector<TrainingInstance> ReadInstances(const std::string& path);

}  // namespace pseudoev

#endif  // PSEUDOEV_SETGEN_H_
