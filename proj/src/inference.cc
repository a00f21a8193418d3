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

#include "pseudoev/inference.h"

#include <algorithm>
#include <sstream>

#include "pseudoev/corpus.h"

namespace pseudoev {

using nlohmann::json;

std::string_view ToString(InferenceMode m) {
  switch (m) {
    case InferenceMode::kSingleParagraph: return "single_paragraph";
    case InferenceMode::kPairedParagraph: return "paired_paragraph";
    case InferenceMode::kSelectedEvidences: return "selected_evidences";
  }
  return "";
}

InferenceMode ParseInferenceMode(std::string_view s) {
  for (auto m : {InferenceMode::kSingleParagraph,
                 InferenceMode::kPairedParagraph,
                 InferenceMode::kSelectedEvidences}) {
    if (ToString(m) == s) return m;
  }
  if (s == "single") return InferenceMode::kSingleParagraph;
  if (s == "paired") return InferenceMode::kPairedParagraph;
  if (s == "selected") return InferenceMode::kSelectedEvidences;
  throw UsageError("unknown mode '" + std::string(s) +
                   "' (single_paragraph, paired_paragraph, "
                   "selected_evidences)");
}

AnswerabilityFn ModelAnswerability(const QaModel& model,
                                   const Vocabulary& vocab,
                                   std::string question, int budget) {
  return [&model, &vocab, question = std::move(question),
          budget](const Passage& p) {
    EncodedInput enc = Tokenize(question, p, vocab, budget);
    return 1.0 - model.Forward(enc.ids).cls(3);
  };
}

PairChoice SelectPair(const MultiHopExample& ex, const AnswerabilityFn& score) {
  std::vector<int> pids;
  for (const auto& p : ex.paragraphs) pids.push_back(p.pid);
  std::sort(pids.begin(), pids.end());
  PairChoice best;
  bool have = false;
  for (size_t i = 0; i < pids.size(); ++i) {
    for (size_t j = i + 1; j < pids.size(); ++j) {
      Passage p = MakePassage(ex, ParagraphUnits(ex, {pids[i], pids[j]}));
      double s = score(p);
      ++best.n_candidates;
      if (!have || s > best.score) {
        have = true;
        best.first = pids[i];
        best.second = pids[j];
        best.score = s;
        best.passage = std::move(p);
      }
    }
  }
  if (!have) throw DataError(ex.qid + ": fewer than two paragraphs");
  return best;
}

PairChoice SelectParagraph(const MultiHopExample& ex,
                           const AnswerabilityFn& score) {
  std::vector<int> pids;
  for (const auto& p : ex.paragraphs) pids.push_back(p.pid);
  std::sort(pids.begin(), pids.end());
  PairChoice best;
  bool have = false;
  for (int pid : pids) {
    Passage p = MakePassage(ex, ParagraphUnits(ex, {pid}));
    double s = score(p);
    ++best.n_candidates;
    if (!have || s > best.score) {
      have = true;
      best.first = best.second = pid;
      best.score = s;
      best.passage = std::move(p);
    }
  }
  if (!have) throw DataError(ex.qid + ": no paragraphs");
  return best;
}

Passage SelectEvidences(const SelectorModel& selector, const Vocabulary& vocab,
                        const MultiHopExample& ex, int k, int budget) {
  std::vector<std::pair<double, SentenceRef>> scored;
  for (const auto& para : ex.paragraphs) {
    Passage p = MakePassage(ex, ParagraphUnits(ex, {para.pid}));
    auto scores = selector.Score(ex.question, p, vocab, budget);
    for (int u = 0; u < p.size(); ++u) {
      scored.push_back({scores[u].value_or(0.0), p.units[u]});
    }
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (static_cast<int>(scored.size()) > k) scored.resize(std::max(0, k));
  std::vector<SentenceRef> refs;
  for (const auto& s : scored) refs.push_back(s.second);
  std::sort(refs.begin(), refs.end());
  return MakePassage(ex, refs);
}

Prediction PredictOnPassage(const QaModel& model, const Vocabulary& vocab,
                            std::string_view question, const Passage& passage,
                            int budget, int max_span_len) {
  EncodedInput enc = Tokenize(question, passage, vocab, budget);
  Prediction pred = Decode(model.Forward(enc.ids), max_span_len);
  ResolveAnswerText(enc, passage, &pred);
  return pred;
}

PredictionRecord Predict(const QaModel& model, const Vocabulary& vocab,
                         const SelectorModel* selector,
                         const MultiHopExample& ex, const PredictOptions& opt) {
  PredictionRecord rec;
  rec.qid = ex.qid;
  rec.mode = opt.mode;
  Passage passage;
  switch (opt.mode) {
    case InferenceMode::kSingleParagraph:
      passage = SelectParagraph(
                    ex, ModelAnswerability(model, vocab, ex.question,
                                           opt.token_budget))
                    .passage;
      break;
    case InferenceMode::kPairedParagraph:
      passage = SelectPair(ex, ModelAnswerability(model, vocab, ex.question,
                                                  opt.token_budget))
                    .passage;
      break;
    case InferenceMode::kSelectedEvidences:
      if (selector == nullptr) {
        throw UsageError("selected_evidences mode needs a selector");
      }
      passage = SelectEvidences(*selector, vocab, ex, opt.top_k,
                                opt.token_budget);
      break;
  }
  rec.selected_units = passage.units;
  rec.prediction = PredictOnPassage(model, vocab, ex.question, passage,
                                    opt.token_budget, opt.max_span_len);
  return rec;
}

std::vector<PredictionRecord> PredictAll(
    const QaModel& model, const Vocabulary& vocab,
    const SelectorModel* selector,
    const std::vector<MultiHopExample>& examples, const PredictOptions& opt) {
  if (opt.mode == InferenceMode::kSelectedEvidences && selector == nullptr) {
    throw UsageError("selected_evidences mode needs a selector");
  }
  std::vector<PredictionRecord> out(examples.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(examples.size()); ++i) {
    out[i] = Predict(model, vocab, selector, examples[i], opt);
  }
  return out;
}

json PredictionToJson(const PredictionRecord& r) {
  json units = json::array();
  for (const auto& u : r.selected_units) units.push_back({u.pid, u.sid});
  json j = {{"qid", r.qid},
            {"answer_text", r.prediction.answer_text},
            {"class", ToString(r.prediction.cls)},
            {"confidence", r.prediction.confidence},
            {"mode", ToString(r.mode)},
            {"selected_units", units}};
  if (r.prediction.span) {
    j["span"] = {r.prediction.span->begin, r.prediction.span->end};
  }
  return j;
}

PredictionRecord PredictionFromJson(const json& j) {
  PredictionRecord r;
  try {
    r.qid = j.at("qid").get<std::string>();
    r.prediction.answer_text = j.at("answer_text").get<std::string>();
    r.prediction.cls = ParseAnswerClass(j.at("class").get<std::string>());
    r.prediction.confidence = j.at("confidence").get<double>();
    r.mode = ParseInferenceMode(j.at("mode").get<std::string>());
    for (const auto& u : j.at("selected_units")) {
      r.selected_units.push_back({u.at(0).get<int>(), u.at(1).get<int>()});
    }
    if (j.contains("span")) {
      r.prediction.span =
          CharSpan{j["span"].at(0).get<int>(), j["span"].at(1).get<int>()};
    }
  } catch (const json::exception& e) {
    throw DataError("prediction " + r.qid + ": " + e.what());
  }
  return r;
}

void WritePredictions(const std::string& path,
                      const std::vector<PredictionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += PredictionToJson(r).dump();
    out.push_back('\n');
  }
  WriteTextFile(path, out);
}

std::vector<PredictionRecord> ReadPredictions(const std::string& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<PredictionRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(PredictionFromJson(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw DataError(path + ": " + e.what());
    }
  }
  return out;
}

}  // namespace pseudoev
