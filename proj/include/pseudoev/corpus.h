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

// Corpus ingestion, serialization and answer localization.

#ifndef PSEUDOEV_CORPUS_H_
#define PSEUDOEV_CORPUS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pseudoev/types.h"

namespace pseudoev {

struct LoadStats {
  int n_records = 0;
  int n_loaded = 0;
  int n_skipped_paragraph_count = 0;  // records without exactly 10 contexts
  int n_skipped_positive_count = 0;   // records without exactly 2 positives
  int n_skipped_answer_missing = 0;   // span answer absent from positives
  int n_dropped_blank_sentences = 0;
};

// Reads distractor-format JSON: an array of records with `question`,
// `answer`, `context` ([title, [sentences]] pairs) and `supporting_facts`
// ([title, sid] pairs). Supporting facts populate gold_evidence only.
// Throws DataError naming the qid on a malformed record.
std::vector<MultiHopExample> LoadDistractorJson(const std::string& path,
                                                LoadStats* stats = nullptr);
std::vector<MultiHopExample> ParseDistractorJson(const nlohmann::json& records,
                                                 LoadStats* stats = nullptr);

nlohmann::json ExampleToJson(const MultiHopExample& ex);
MultiHopExample ExampleFromJson(const nlohmann::json& j);

// Newline-delimited JSON, one example per line.
void WriteCorpus(const std::string& path,
                 const std::vector<MultiHopExample>& examples);
std::vector<MultiHopExample> ReadCorpus(const std::string& path);

// Character span of answer.text in passage.resolved_text. An occurrence
// inside `anchor` wins; otherwise the first occurrence. nullopt = NotFound.
std::optional<CharSpan> LocateAnswer(const Passage& passage,
                                     const Answer& answer,
                                     std::optional<SentenceRef> anchor = {});

// The answer sentence: first sentence of a positive paragraph (pid, sid
// order) containing the answer text. For yes/no answers, the first gold
// evidence sentence when annotations exist.
std::optional<SentenceRef> FindAnswerSentence(const MultiHopExample& ex);

// Writes `content` to `path`, creating parent directories.
void WriteTextFile(const std::string& path, const std::string& content);
std::string ReadTextFile(const std::string& path);

}  // namespace pseudoev

#endif  // PSEUDOEV_CORPUS_H_
