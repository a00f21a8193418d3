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

// Greedy counterfactual evidence extraction.
//
// Starting from the answer sentence S*, each step scores every remaining
// sentence S_i of the passage D against the current set E:
//
//   combined      P(A | Q, S_i + E) - P(A | Q, D - (S_i + E))
//   accumulative  P(A | Q, S_i + E) - P(A | Q, E)
//
// and inserts the best one. Sub-passages keep the original sentence order.

#ifndef PSEUDOEV_INTERPRETER_H_
#define PSEUDOEV_INTERPRETER_H_

#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pseudoev/qa_model.h"
#include "pseudoev/setgen.h"
#include "pseudoev/tokenizer.h"
#include "pseudoev/types.h"

namespace pseudoev {

enum class Strategy { kCombined, kAccumulative };
enum class StopReason { kNegativeGain, kMaxSteps, kExhausted };

std::string_view ToString(Strategy s);
std::string_view ToString(StopReason r);
Strategy ParseStrategy(std::string_view s);
StopReason ParseStopReason(std::string_view s);

struct InterpreterConfig {
  Strategy strategy = Strategy::kCombined;
  int T = 5;

  void Validate() const;
};

struct EvidenceSet {
  std::string qid;
  std::vector<SentenceRef> members;  // members[0] is S*
  std::vector<double> scores;        // one per inserted sentence
  StopReason stopped_by = StopReason::kMaxSteps;
};

struct InterpreterStats {
  int n_extracted = 0;
  int n_failed = 0;             // instances skipped
  int n_unlocatable = 0;        // sub-passages read as confidence 0
  int n_evaluations = 0;
};

// `keep[k]` selects unit k of inst.passage. nullopt when the answer cannot
// be located in the resulting sub-passage.
class ConfidenceOracle {
 public:
  virtual ~ConfidenceOracle() = default;
  virtual std::optional<double> Confidence(
      const TrainingInstance& inst, const std::vector<char>& keep) const = 0;
};

// Target-head confidence of a QA model snapshot.
class ModelConfidence : public ConfidenceOracle {
 public:
  ModelConfidence(const QaModel& model, const Vocabulary& vocab, int budget)
      : model_(model), vocab_(vocab), budget_(budget) {}
  std::optional<double> Confidence(
      const TrainingInstance& inst,
      const std::vector<char>& keep) const override;

 private:
  const QaModel& model_;
  const Vocabulary& vocab_;
  int budget_;
};

// |E & E*| / |E*| over kept sentences.
class StubConfidence : public ConfidenceOracle {
 public:
  explicit StubConfidence(SentenceSet gold) : gold_(std::move(gold)) {}
  std::optional<double> Confidence(
      const TrainingInstance& inst,
      const std::vector<char>& keep) const override;

 private:
  SentenceSet gold_;
};

// Sub-passage of the units selected by `keep`, in passage order.
Passage SubPassage(const Passage& passage, const std::vector<char>& keep);

// Scores of every unit not in `current`, keyed by unit reference.
std::map<SentenceRef, double> StepScores(const ConfidenceOracle& oracle,
                                         const TrainingInstance& inst,
                                         const SentenceSet& current,
                                         Strategy strategy,
                                         InterpreterStats* stats = nullptr);

// Throws DataError if the instance has no answer sentence in its passage.
EvidenceSet Extract(const ConfidenceOracle& oracle,
                    const TrainingInstance& inst, const InterpreterConfig& cfg,
                    InterpreterStats* stats = nullptr);

inline constexpr int kBruteForceMaxUnits = 8;

// Tabulates the confidence of all 2^n sub-passages, then replays the greedy
// definition from the table. Throws UsageError above kBruteForceMaxUnits.
EvidenceSet BruteForceExtract(const ConfidenceOracle& oracle,
                              const TrainingInstance& inst,
                              const InterpreterConfig& cfg);

// Set precision and recall of members against gold.
std::pair<double, double> EvidenceRecallPrecision(const EvidenceSet& pred,
                                                  const SentenceSet& gold);

// Extract over all instances; failures come back as nullopt. Results are in
// input order. The serial form is the reference for the parallel one.
std::vector<std::optional<EvidenceSet>> ExtractAll(
    const ConfidenceOracle& oracle,
    const std::vector<TrainingInstance>& instances,
    const InterpreterConfig& cfg, InterpreterStats* stats = nullptr);
std::vector<std::optional<EvidenceSet>> ExtractAllSerial(
    const ConfidenceOracle& oracle,
    const std::vector<TrainingInstance>& instances,
    const InterpreterConfig& cfg, InterpreterStats* stats = nullptr);

// E+ instance: the A+ instance restricted to the members.
std::optional<TrainingInstance> MakeEvidencePositive(
    const TrainingInstance& a_pos, const EvidenceSet& evidence);

nlohmann::json EvidenceSetToJson(const EvidenceSet& e);
EvidenceSet EvidenceSetFromJson(const nlohmann::json& j);
void WriteEvidenceSets(const std::string& path,
                       const std::vector<EvidenceSet>& sets);
std::vector<EvidenceSet> ReadEvidenceSets(const std::string& path);

}  // namespace pseudoev

#endif  // PSEUDOEV_INTERPRETER_H_
