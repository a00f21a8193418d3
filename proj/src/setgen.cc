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

#include "pseudoev/setgen.h"

#include <algorithm>
#include <iostream>
#include <random>
#include <sstream>

#include "pseudoev/corpus.h"

namespace pseudoev {

using nlohmann::json;

std::string_view ToString(InstanceSet s) {
  switch (s) {
    case InstanceSet::kAnswerPositive: return "A+";
    case InstanceSet::kAnswerNegative: return "A-";
    case InstanceSet::kEvidenceNegative: return "E-";
    case InstanceSet::kEvidencePositive: return "E+";
  }
  return "A+";
}

std::string_view ToString(NegativeType t) {
  switch (t) {
    case NegativeType::kAnswerOnly: return "answer_only";
    case NegativeType::kAnswerPlusIrrelevant: return "answer_plus_irrelevant";
    case NegativeType::kPartialPlusIrrelevant: return "partial_plus_irrelevant";
  }
  return "answer_only";
}

InstanceSet ParseInstanceSet(std::string_view s) {
  if (s == "A+") return InstanceSet::kAnswerPositive;
  if (s == "A-") return InstanceSet::kAnswerNegative;
  if (s == "E-") return InstanceSet::kEvidenceNegative;
  if (s == "E+") return InstanceSet::kEvidencePositive;
  throw DataError("unknown instance set '" + std::string(s) + "'");
}

namespace {

NegativeType ParseNegativeType(std::string_view s) {
  for (auto t : {NegativeType::kAnswerOnly, NegativeType::kAnswerPlusIrrelevant,
                 NegativeType::kPartialPlusIrrelevant}) {
    if (ToString(t) == s) return t;
  }
  throw DataError("unknown negative type '" + std::string(s) + "'");
}

TrainingInstance Skeleton(const MultiHopExample& ex, InstanceSet set) {
  TrainingInstance inst;
  inst.qid = ex.qid;
  inst.question = ex.question;
  inst.answer = ex.answer;
  inst.set = set;
  return inst;
}

// Fills passage, anchor, span and class for an answerable instance.
void MakeAnswerable(const MultiHopExample& ex,
                    const std::vector<SentenceRef>& refs,
                    std::optional<SentenceRef> answer_sentence,
                    TrainingInstance* inst, SetGenStats* stats) {
  inst->passage = MakePassage(ex, refs);
  inst->answerability = Answerability::kAnswerable;
  inst->class_label = ClassFor(ex.answer.type);
  if (answer_sentence && inst->passage.IndexOf(*answer_sentence) >= 0) {
    inst->anchor = answer_sentence;
  }
  if (ex.answer.type == AnswerType::kSpan) {
    inst->answer_span = LocateAnswer(inst->passage, ex.answer, inst->anchor);
    if (!inst->answer_span && stats) ++stats->n_unlocatable_span;
  }
}

size_t Pick(std::mt19937_64& rng, size_t n) { return rng() % n; }

bool ContainsAll(const Passage& p, const SentenceSet& refs) {
  return std::all_of(refs.begin(), refs.end(),
                     [&](const SentenceRef& r) { return p.IndexOf(r) >= 0; });
}

bool ContainsAny(const Passage& p, const SentenceSet& refs) {
  return std::any_of(refs.begin(), refs.end(),
                     [&](const SentenceRef& r) { return p.IndexOf(r) >= 0; });
}

}  // namespace

uint64_t ExampleSeed(uint64_t seed, const std::string& qid) {
  // FNV-1a over the qid, mixed with the run seed.
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : qid) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h ^ (seed * 0x9e3779b97f4a7c15ull);
}

std::pair<std::vector<TrainingInstance>, std::vector<TrainingInstance>>
BuildAnswerSets(const MultiHopExample& ex, int k_neg, uint64_t seed,
                SetGenStats* stats) {
  auto pos = ex.PositivePids();
  if (pos.size() != 2) {
    throw DataError(ex.qid + ": expected 2 positive paragraphs");
  }
  std::sort(pos.begin(), pos.end());
  std::vector<TrainingInstance> positives, negatives;

  TrainingInstance ap = Skeleton(ex, InstanceSet::kAnswerPositive);
  MakeAnswerable(ex, ParagraphUnits(ex, pos), FindAnswerSentence(ex), &ap,
                 stats);
  positives.push_back(std::move(ap));

  auto neg = ex.NegativePids();
  std::vector<std::pair<int, int>> pairs;
  for (size_t i = 0; i < neg.size(); ++i) {
    for (size_t j = i + 1; j < neg.size(); ++j) pairs.push_back({neg[i], neg[j]});
  }
  int take = std::max(0, k_neg);
  if (take > static_cast<int>(pairs.size())) {
    std::cerr << "warning: " << ex.qid << ": k_neg " << k_neg
              << " capped at " << pairs.size() << "\n";
    if (stats) ++stats->n_neg_capped;
    take = static_cast<int>(pairs.size());
  }
  // Partial Fisher-Yates: sampling without replacement.
  std::mt19937_64 rng(ExampleSeed(seed, ex.qid));
  for (int i = 0; i < take; ++i) {
    std::swap(pairs[i], pairs[i + Pick(rng, pairs.size() - i)]);
    TrainingInstance an = Skeleton(ex, InstanceSet::kAnswerNegative);
    an.passage = MakePassage(ex, ParagraphUnits(ex, {pairs[i].first,
                                                     pairs[i].second}));
    an.answerability = Answerability::kUnanswerable;
    an.class_label = AnswerClass::kNone;
    negatives.push_back(std::move(an));
  }
  return {std::move(positives), std::move(negatives)};
}

std::vector<TrainingInstance> BuildEvidenceNegatives(const MultiHopExample& ex,
                                                     uint64_t seed,
                                                     SetGenStats* stats) {
  std::vector<TrainingInstance> out;
  auto neg = ex.NegativePids();
  auto pos = ex.PositivePids();
  if (neg.empty() || pos.empty()) return out;
  // A distinct stream from BuildAnswerSets.
  std::mt19937_64 rng(ExampleSeed(seed + 1, ex.qid));
  const int d_type2 = neg[Pick(rng, neg.size())];
  const int d_type3 = neg[Pick(rng, neg.size())];

  auto s_star = FindAnswerSentence(ex);
  auto make = [&](NegativeType type, const std::vector<SentenceRef>& refs) {
    TrainingInstance inst = Skeleton(ex, InstanceSet::kEvidenceNegative);
    MakeAnswerable(ex, refs, s_star, &inst, stats);
    inst.evidentiality = Evidentiality::kNegative;
    inst.neg_type = type;
    out.push_back(std::move(inst));
  };

  if (s_star) {
    make(NegativeType::kAnswerOnly, {*s_star});
    std::vector<SentenceRef> refs = {*s_star};
    for (const auto& r : ParagraphUnits(ex, {d_type2})) refs.push_back(r);
    make(NegativeType::kAnswerPlusIrrelevant, refs);
  } else if (stats) {
    ++stats->n_missing_answer_sentence;
  }
  const int d1 = s_star ? s_star->pid : pos.front();
  make(NegativeType::kPartialPlusIrrelevant, ParagraphUnits(ex, {d1, d_type3}));
  return out;
}

std::vector<TrainingInstance> BuildTrainingSets(
    const std::vector<MultiHopExample>& examples, int k_neg, uint64_t seed,
    SetGenStats* stats) {
  std::vector<TrainingInstance> out;
  for (const auto& ex : examples) {
    auto [ap, an] = BuildAnswerSets(ex, k_neg, seed, stats);
    auto en = BuildEvidenceNegatives(ex, seed, stats);
    for (auto* group : {&ap, &an, &en}) {
      for (auto& inst : *group) out.push_back(std::move(inst));
    }
  }
  return out;
}

std::vector<TrainingInstance> BuildSingleParagraphInstances(
    const std::vector<MultiHopExample>& examples, int k_neg, uint64_t seed,
    SetGenStats* stats) {
  std::vector<TrainingInstance> out;
  for (const auto& ex : examples) {
    auto s_star = FindAnswerSentence(ex);
    for (int pid : ex.PositivePids()) {
      auto refs = ParagraphUnits(ex, {pid});
      Passage p = MakePassage(ex, refs);
      bool has_answer =
          ex.answer.type == AnswerType::kSpan
              ? LocateAnswer(p, ex.answer).has_value()
              : s_star && p.IndexOf(*s_star) >= 0;
      if (has_answer) {
        TrainingInstance inst = Skeleton(ex, InstanceSet::kAnswerPositive);
        MakeAnswerable(ex, refs, s_star, &inst, stats);
        out.push_back(std::move(inst));
      } else {
        TrainingInstance inst = Skeleton(ex, InstanceSet::kAnswerNegative);
        inst.passage = std::move(p);
        inst.answerability = Answerability::kUnanswerable;
        inst.class_label = AnswerClass::kNone;
        out.push_back(std::move(inst));
      }
    }
    auto neg = ex.NegativePids();
    std::mt19937_64 rng(ExampleSeed(seed, ex.qid));
    int take = std::min<int>(std::max(0, k_neg), neg.size());
    for (int i = 0; i < take; ++i) {
      std::swap(neg[i], neg[i + Pick(rng, neg.size() - i)]);
      TrainingInstance inst = Skeleton(ex, InstanceSet::kAnswerNegative);
      inst.passage = MakePassage(ex, ParagraphUnits(ex, {neg[i]}));
      inst.answerability = Answerability::kUnanswerable;
      inst.class_label = AnswerClass::kNone;
      out.push_back(std::move(inst));
    }
  }
  return out;
}

LabelAudit AuditLabels(const std::vector<TrainingInstance>& instances,
                       const MultiHopExample& gt) {
  LabelAudit audit;
  const SentenceSet empty;
  const SentenceSet& gold = gt.gold_evidence ? *gt.gold_evidence : empty;
  auto violate = [&](const TrainingInstance& inst, const std::string& rule) {
    ++audit.n_violations;
    audit.violations.push_back({inst.qid, rule});
  };
  for (const auto& inst : instances) {
    const bool has_answer =
        gt.answer.type != AnswerType::kSpan ||
        inst.passage.resolved_text.find(gt.answer.text) != std::string::npos;
    const bool answer_string_present =
        !gt.answer.text.empty() &&
        inst.passage.resolved_text.find(gt.answer.text) != std::string::npos;
    switch (inst.set) {
      case InstanceSet::kEvidenceNegative: {
        ++audit.n_checked;
        bool bad = false;
        if (!has_answer) {
          violate(inst, "E-: answer missing");
          bad = true;
        }
        if (ContainsAll(inst.passage, gold)) {
          violate(inst, "E-: contains all gold evidence");
          bad = true;
        }
        if (!bad && inst.answerability != Answerability::kAnswerable) {
          violate(inst, "E-: labeled unanswerable");
        }
        break;
      }
      case InstanceSet::kAnswerNegative:
        ++audit.n_checked;
        if (answer_string_present && gt.answer.type == AnswerType::kSpan) {
          violate(inst, "A-: answer present");
        } else if (ContainsAny(inst.passage, gold)) {
          violate(inst, "A-: gold evidence present");
        } else if (inst.class_label != AnswerClass::kNone || inst.answer_span) {
          violate(inst, "A-: carries an answer target");
        }
        break;
      case InstanceSet::kAnswerPositive:
        ++audit.n_checked;
        if (!ContainsAll(inst.passage, gold)) {
          violate(inst, "A+: gold evidence missing");
        }
        break;
      case InstanceSet::kEvidencePositive:
        break;
    }
  }
  return audit;
}

json InstanceToJson(const TrainingInstance& inst) {
  json units = json::array();
  for (const auto& u : inst.passage.units) units.push_back({u.pid, u.sid});
  json j = {{"qid", inst.qid},
            {"set", ToString(inst.set)},
            {"question", inst.question},
            {"answer", {{"text", inst.answer.text},
                        {"type", ToString(inst.answer.type)}}},
            {"units", units},
            {"text", inst.passage.resolved_text},
            {"boundaries", inst.passage.sentence_boundaries},
            {"answerability", inst.answerability == Answerability::kAnswerable
                                  ? "answerable"
                                  : "unanswerable"},
            {"evidentiality",
             inst.evidentiality == Evidentiality::kPositive   ? "positive"
             : inst.evidentiality == Evidentiality::kNegative ? "negative"
                                                              : "unknown"},
            {"class", ToString(inst.class_label)}};
  j["neg_type"] = inst.neg_type ? json(ToString(*inst.neg_type)) : json(nullptr);
  j["answer_span"] = inst.answer_span
                         ? json::array({inst.answer_span->begin,
                                        inst.answer_span->end})
                         : json(nullptr);
  j["anchor"] = inst.anchor ? json::array({inst.anchor->pid, inst.anchor->sid})
                            : json(nullptr);
  return j;
}

TrainingInstance InstanceFromJson(const json& j) {
  TrainingInstance inst;
  try {
    inst.qid = j.at("qid").get<std::string>();
    inst.set = ParseInstanceSet(j.at("set").get<std::string>());
    inst.question = j.at("question").get<std::string>();
    inst.answer.text = j.at("answer").at("text").get<std::string>();
    inst.answer.type =
        ParseAnswerType(j.at("answer").at("type").get<std::string>());
    for (const auto& u : j.at("units")) {
      inst.passage.units.push_back({u.at(0).get<int>(), u.at(1).get<int>()});
    }
    inst.passage.resolved_text = j.at("text").get<std::string>();
    inst.passage.sentence_boundaries =
        j.at("boundaries").get<std::vector<int>>();
    if (inst.passage.sentence_boundaries.size() !=
        inst.passage.units.size() + 1) {
      throw DataError(inst.qid + ": boundaries do not match units");
    }
    inst.answerability = j.at("answerability").get<std::string>() == "answerable"
                             ? Answerability::kAnswerable
                             : Answerability::kUnanswerable;
    std::string ev = j.at("evidentiality").get<std::string>();
    inst.evidentiality = ev == "positive"   ? Evidentiality::kPositive
                         : ev == "negative" ? Evidentiality::kNegative
                                            : Evidentiality::kUnknown;
    inst.class_label = ParseAnswerClass(j.at("class").get<std::string>());
    if (!j.at("neg_type").is_null()) {
      inst.neg_type = ParseNegativeType(j["neg_type"].get<std::string>());
    }
    if (!j.at("answer_span").is_null()) {
      inst.answer_span = CharSpan{j["answer_span"][0].get<int>(),
                                  j["answer_span"][1].get<int>()};
    }
    if (!j.at("anchor").is_null()) {
      inst.anchor = SentenceRef{j["anchor"][0].get<int>(),
                                j["anchor"][1].get<int>()};
    }
  } catch (const json::exception& e) {
    throw DataError(inst.qid + ": " + e.what());
  }
  return inst;
}

void WriteInstances(const std::string& path,
                    const std::vector<TrainingInstance>& instances) {
  std::string out;
  for (const auto& inst : instances) {
    out += InstanceToJson(inst).dump();
    out.push_back('\n');
  }
  WriteTextFile(path, out);
}

std::vector<TrainingInstance> ReadInstances(const std::string& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<TrainingInstance> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(InstanceFromJson(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw DataError(path + ": " + e.what());
    }
  }
  return out;
}

}  // namespace pseudoev
