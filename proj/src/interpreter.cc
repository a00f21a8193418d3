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

#include "pseudoev/interpreter.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "pseudoev/corpus.h"

namespace pseudoev {

using nlohmann::json;

std::string_view ToString(Strategy s) {
  return s == Strategy::kCombined ? "combined" : "accumulative";
}

std::string_view ToString(StopReason r) {
  switch (r) {
    case StopReason::kNegativeGain: return "negative_gain";
    case StopReason::kMaxSteps: return "max_steps";
    case StopReason::kExhausted: return "exhausted";
  }
  return "";
}

Strategy ParseStrategy(std::string_view s) {
  if (s == "combined") return Strategy::kCombined;
  if (s == "accumulative") return Strategy::kAccumulative;
  throw UsageError("unknown strategy '" + std::string(s) +
                   "' (combined, accumulative)");
}

StopReason ParseStopReason(std::string_view s) {
  if (s == "negative_gain") return StopReason::kNegativeGain;
  if (s == "max_steps") return StopReason::kMaxSteps;
  if (s == "exhausted") return StopReason::kExhausted;
  throw DataError("unknown stop reason '" + std::string(s) + "'");
}

void InterpreterConfig::Validate() const {
  if (T < 1) throw UsageError("T must be >= 1");
}

Passage SubPassage(const Passage& passage, const std::vector<char>& keep) {
  Passage p;
  for (int k = 0; k < passage.size(); ++k) {
    if (!keep[k]) continue;
    if (!p.units.empty()) {
      p.resolved_text.push_back(' ');
      ++p.sentence_boundaries.back();
    }
    p.units.push_back(passage.units[k]);
    p.resolved_text += passage.UnitText(k);
    p.sentence_boundaries.push_back(static_cast<int>(p.resolved_text.size()));
  }
  return p;
}

std::optional<double> ModelConfidence::Confidence(
    const TrainingInstance& inst, const std::vector<char>& keep) const {
  Passage sub = SubPassage(inst.passage, keep);
  AnswerTarget target;
  target.cls = inst.class_label;
  EncodedInput enc = Tokenize(inst.question, sub, vocab_, budget_);
  if (target.cls == AnswerClass::kSpan) {
    auto chars = LocateAnswer(sub, inst.answer, inst.anchor);
    if (!chars) return std::nullopt;
    auto tokens = enc.MapSpan(*chars);
    if (!tokens) return std::nullopt;
    target.start = tokens->first;
    target.end = tokens->second;
  }
  ModelOutput out = model_.Forward(enc.ids);
  return AnswerConfidence(out, target, Head::kTarget);
}

std::optional<double> StubConfidence::Confidence(
    const TrainingInstance& inst, const std::vector<char>& keep) const {
  if (gold_.empty()) return 0.0;
  int hit = 0;
  for (int k = 0; k < inst.passage.size(); ++k) {
    if (keep[k] && gold_.count(inst.passage.units[k])) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(gold_.size());
}

namespace {

// Memoized confidence over keep-masks for one instance.
class Evaluator {
 public:
  Evaluator(const ConfidenceOracle& oracle, const TrainingInstance& inst,
            InterpreterStats* stats)
      : oracle_(oracle), inst_(inst), stats_(stats) {}

  double operator()(const std::vector<char>& keep) {
    auto it = memo_.find(keep);
    if (it != memo_.end()) return it->second;
    double value = 0.0;
    if (stats_) ++stats_->n_evaluations;
    if (auto c = oracle_.Confidence(inst_, keep)) {
      value = *c;
    } else if (stats_) {
      ++stats_->n_unlocatable;
    }
    memo_.emplace(keep, value);
    return value;
  }

 private:
  const ConfidenceOracle& oracle_;
  const TrainingInstance& inst_;
  InterpreterStats* stats_;
  std::map<std::vector<char>, double> memo_;
};

// Unit indices in ascending (pid, sid) order.
std::vector<int> RefOrder(const Passage& passage) {
  std::vector<int> order(passage.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return passage.units[a] < passage.units[b];
  });
  return order;
}

int AnchorIndex(const TrainingInstance& inst) {
  int a = inst.anchor ? inst.passage.IndexOf(*inst.anchor) : -1;
  if (a < 0) throw DataError(inst.qid + ": answer sentence not in passage");
  return a;
}

std::vector<std::pair<int, double>> ScoreCandidates(
    Evaluator& eval, const TrainingInstance& inst,
    const std::vector<char>& in_set, const std::vector<int>& order,
    Strategy strategy) {
  const int n = inst.passage.size();
  std::vector<std::pair<int, double>> scores;
  double base = 0.0;
  bool have_base = false;
  for (int k : order) {
    if (in_set[k]) continue;
    std::vector<char> with = in_set;
    with[k] = 1;
    double score = eval(with);
    if (strategy == Strategy::kCombined) {
      std::vector<char> rest(n);
      for (int i = 0; i < n; ++i) rest[i] = !with[i];
      score -= eval(rest);
    } else {
      if (!have_base) {
        base = eval(in_set);
        have_base = true;
      }
      score -= base;
    }
    scores.push_back({k, score});
  }
  return scores;
}

}  // namespace

std::map<SentenceRef, double> StepScores(const ConfidenceOracle& oracle,
                                         const TrainingInstance& inst,
                                         const SentenceSet& current,
                                         Strategy strategy,
                                         InterpreterStats* stats) {
  const int n = inst.passage.size();
  std::vector<char> in_set(n, 0);
  for (int k = 0; k < n; ++k) in_set[k] = current.count(inst.passage.units[k]);
  Evaluator eval(oracle, inst, stats);
  std::map<SentenceRef, double> out;
  for (auto [k, s] :
       ScoreCandidates(eval, inst, in_set, RefOrder(inst.passage), strategy)) {
    out[inst.passage.units[k]] = s;
  }
  return out;
}

EvidenceSet Extract(const ConfidenceOracle& oracle,
                    const TrainingInstance& inst, const InterpreterConfig& cfg,
                    InterpreterStats* stats) {
  cfg.Validate();
  const int n = inst.passage.size();
  const int anchor = AnchorIndex(inst);
  const std::vector<int> order = RefOrder(inst.passage);
  Evaluator eval(oracle, inst, stats);

  EvidenceSet result;
  result.qid = inst.qid;
  result.members.push_back(inst.passage.units[anchor]);
  std::vector<char> in_set(n, 0);
  in_set[anchor] = 1;
  for (;;) {
    if (static_cast<int>(result.members.size()) == cfg.T + 1) {
      result.stopped_by = StopReason::kMaxSteps;
      break;
    }
    auto scores = ScoreCandidates(eval, inst, in_set, order, cfg.strategy);
    if (scores.empty()) {
      result.stopped_by = StopReason::kExhausted;
      break;
    }
    // Candidates arrive in (pid, sid) order; strict > keeps the smaller.
    auto best = scores.front();
    for (const auto& c : scores) {
      if (c.second > best.second) best = c;
    }
    if (best.second < 0.0) {
      result.stopped_by = StopReason::kNegativeGain;
      break;
    }
    in_set[best.first] = 1;
    result.members.push_back(inst.passage.units[best.first]);
    result.scores.push_back(best.second);
  }
  if (stats) ++stats->n_extracted;
  return result;
}

EvidenceSet BruteForceExtract(const ConfidenceOracle& oracle,
                              const TrainingInstance& inst,
                              const InterpreterConfig& cfg) {
  cfg.Validate();
  const int n = inst.passage.size();
  if (n > kBruteForceMaxUnits) {
    throw UsageError("brute force extraction supports at most " +
                     std::to_string(kBruteForceMaxUnits) + " sentences");
  }
  const int anchor = AnchorIndex(inst);
  const unsigned full = (1u << n) - 1;
  std::vector<double> table(full + 1);
  for (unsigned mask = 0; mask <= full; ++mask) {
    std::vector<char> keep(n);
    for (int k = 0; k < n; ++k) keep[k] = (mask >> k) & 1u;
    table[mask] = oracle.Confidence(inst, keep).value_or(0.0);
  }

  EvidenceSet result;
  result.qid = inst.qid;
  result.members.push_back(inst.passage.units[anchor]);
  unsigned current = 1u << anchor;
  while (true) {
    if (static_cast<int>(result.members.size()) == cfg.T + 1) {
      result.stopped_by = StopReason::kMaxSteps;
      return result;
    }
    struct Candidate {
      double score;
      SentenceRef ref;
      int index;
    };
    std::vector<Candidate> all;
    for (int k = 0; k < n; ++k) {
      if (current & (1u << k)) continue;
      unsigned with = current | (1u << k);
      double other = cfg.strategy == Strategy::kCombined ? table[full & ~with]
                                                         : table[current];
      all.push_back({table[with] - other, inst.passage.units[k], k});
    }
    if (all.empty()) {
      result.stopped_by = StopReason::kExhausted;
      return result;
    }
    auto best = std::min_element(
        all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
          if (a.score != b.score) return a.score > b.score;
          return a.ref < b.ref;
        });
    if (best->score < 0.0) {
      result.stopped_by = StopReason::kNegativeGain;
      return result;
    }
    current |= 1u << best->index;
    result.members.push_back(best->ref);
    result.scores.push_back(best->score);
  }
}

std::pair<double, double> EvidenceRecallPrecision(const EvidenceSet& pred,
                                                  const SentenceSet& gold) {
  SentenceSet members(pred.members.begin(), pred.members.end());
  int hit = 0;
  for (const auto& r : members) hit += gold.count(r);
  double p = members.empty() ? 0.0 : static_cast<double>(hit) / members.size();
  double r = gold.empty() ? 0.0 : static_cast<double>(hit) / gold.size();
  return {p, r};
}

namespace {

void MergeStats(const InterpreterStats& s, InterpreterStats* into) {
  into->n_extracted += s.n_extracted;
  into->n_failed += s.n_failed;
  into->n_unlocatable += s.n_unlocatable;
  into->n_evaluations += s.n_evaluations;
}

std::optional<EvidenceSet> TryExtract(const ConfidenceOracle& oracle,
                                      const TrainingInstance& inst,
                                      const InterpreterConfig& cfg,
                                      InterpreterStats* stats) {
  try {
    return Extract(oracle, inst, cfg, stats);
  } catch (const DataError&) {
    ++stats->n_failed;
    return std::nullopt;
  }
}

}  // namespace

std::vector<std::optional<EvidenceSet>> ExtractAll(
    const ConfidenceOracle& oracle,
    const std::vector<TrainingInstance>& instances,
    const InterpreterConfig& cfg, InterpreterStats* stats) {
  cfg.Validate();
  const int n = static_cast<int>(instances.size());
  std::vector<std::optional<EvidenceSet>> out(n);
  std::vector<InterpreterStats> local(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    out[i] = TryExtract(oracle, instances[i], cfg, &local[i]);
  }
  if (stats) {
    for (const auto& s : local) MergeStats(s, stats);
  }
  return out;
}

std::vector<std::optional<EvidenceSet>> ExtractAllSerial(
    const ConfidenceOracle& oracle,
    const std::vector<TrainingInstance>& instances,
    const InterpreterConfig& cfg, InterpreterStats* stats) {
  cfg.Validate();
  InterpreterStats total;
  std::vector<std::optional<EvidenceSet>> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    out.push_back(TryExtract(oracle, inst, cfg, &total));
  }
  if (stats) MergeStats(total, stats);
  return out;
}

std::optional<TrainingInstance> MakeEvidencePositive(
    const TrainingInstance& a_pos, const EvidenceSet& evidence) {
  SentenceSet members(evidence.members.begin(), evidence.members.end());
  std::vector<char> keep(a_pos.passage.size(), 0);
  int found = 0;
  for (int k = 0; k < a_pos.passage.size(); ++k) {
    keep[k] = members.count(a_pos.passage.units[k]);
    found += keep[k];
  }
  if (found != static_cast<int>(members.size())) return std::nullopt;
  TrainingInstance inst = a_pos;
  inst.passage = SubPassage(a_pos.passage, keep);
  inst.set = InstanceSet::kEvidencePositive;
  inst.answerability = Answerability::kAnswerable;
  inst.evidentiality = Evidentiality::kPositive;
  inst.neg_type.reset();
  inst.anchor = evidence.members.front();
  inst.answer_span.reset();
  if (inst.class_label == AnswerClass::kSpan) {
    inst.answer_span = LocateAnswer(inst.passage, inst.answer, inst.anchor);
    if (!inst.answer_span) return std::nullopt;
  }
  return inst;
}

json EvidenceSetToJson(const EvidenceSet& e) {
  json members = json::array();
  for (const auto& r : e.members) members.push_back({r.pid, r.sid});
  return {{"qid", e.qid},
          {"members", members},
          {"scores", e.scores},
          {"stopped_by", ToString(e.stopped_by)}};
}

EvidenceSet EvidenceSetFromJson(const json& j) {
  EvidenceSet e;
  try {
    e.qid = j.at("qid").get<std::string>();
    for (const auto& m : j.at("members")) {
      e.members.push_back({m.at(0).get<int>(), m.at(1).get<int>()});
    }
    e.scores = j.at("scores").get<std::vector<double>>();
    e.stopped_by = ParseStopReason(j.at("stopped_by").get<std::string>());
  } catch (const json::exception& ex) {
    throw DataError("evidence set " + e.qid + ": " + ex.what());
  }
  if (e.members.empty() || e.scores.size() + 1 != e.members.size()) {
    throw DataError("evidence set " + e.qid + ": members/scores mismatch");
  }
  return e;
}

void WriteEvidenceSets(const std::string& path,
                       const std::vector<EvidenceSet>& sets) {
  std::string out;
  for (const auto& e : sets) {
    out += EvidenceSetToJson(e).dump();
    out.push_back('\n');
  }
  WriteTextFile(path, out);
}

std::vector<EvidenceSet> ReadEvidenceSets(const std::string& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<EvidenceSet> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(EvidenceSetFromJson(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw DataError(path + ": " + e.what());
    }
  }
  return out;
}

}  // namespace pseudoev
