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

#include "pseudoev/evaluation.h"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "fmt/format.h"
#include "pseudoev/corpus.h"

namespace pseudoev {

using nlohmann::json;

namespace {

std::vector<std::string> Words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool IsYesNo(const std::string& s) { return s == "yes" || s == "no"; }

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace

std::string NormalizeAnswer(std::string_view s) {
  std::string text;
  for (unsigned char c : s) {
    if (std::ispunct(c)) continue;
    text.push_back(static_cast<char>(std::tolower(c)));
  }
  std::string out;
  for (const auto& w : Words(text)) {
    if (w == "a" || w == "an" || w == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

double QaExactMatch(std::string_view pred, std::string_view gold) {
  return NormalizeAnswer(pred) == NormalizeAnswer(gold) ? 1.0 : 0.0;
}

double QaF1(std::string_view pred, std::string_view gold) {
  std::string p = NormalizeAnswer(pred);
  std::string g = NormalizeAnswer(gold);
  if (IsYesNo(p) || IsYesNo(g)) return p == g ? 1.0 : 0.0;
  auto pt = Words(p);
  auto gt = Words(g);
  if (pt.empty() || gt.empty()) return pt == gt ? 1.0 : 0.0;
  std::map<std::string, int> counts;
  for (const auto& w : gt) ++counts[w];
  int common = 0;
  for (const auto& w : pt) {
    auto it = counts.find(w);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  double precision = static_cast<double>(common) / pt.size();
  double recall = static_cast<double>(common) / gt.size();
  return 2.0 * precision * recall / (precision + recall);
}

Prf EvidencePrf(const SentenceSet& pred, const SentenceSet& gold) {
  Prf r;
  if (pred.empty() || gold.empty()) return r;
  int hit = 0;
  for (const auto& s : pred) hit += gold.count(s);
  r.precision = static_cast<double>(hit) / pred.size();
  r.recall = static_cast<double>(hit) / gold.size();
  if (hit > 0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

BaselineFn ModelBaseline(const QaModel& model, const Vocabulary& vocab,
                         int budget, int max_span_len) {
  return [&model, &vocab, budget, max_span_len](const MultiHopExample& ex,
                                                const Passage& p) {
    return PredictOnPassage(model, vocab, ex.question, p, budget, max_span_len)
        .answer_text;
  };
}

std::set<std::string> BuildChallengeSet(
    const std::vector<MultiHopExample>& dev, const BaselineFn& baseline) {
  std::vector<char> easy(dev.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(dev.size()); ++i) {
    const auto& ex = dev[i];
    for (int pid : ex.PositivePids()) {
      Passage p = MakePassage(ex, ParagraphUnits(ex, {pid}));
      if (QaF1(baseline(ex, p), ex.answer.text) > 0.0) {
        easy[i] = 1;
        break;
      }
    }
  }
  std::set<std::string> out;
  for (size_t i = 0; i < dev.size(); ++i) {
    if (!easy[i]) out.insert(dev[i].qid);
  }
  return out;
}

SubsetConfidenceFn ModelSubsetConfidence(const QaModel& model,
                                         const Vocabulary& vocab, int budget) {
  return [&model, &vocab, budget](const MultiHopExample& ex,
                                  const std::vector<SentenceRef>& refs) {
    Passage p = MakePassage(ex, refs);
    EncodedInput enc = Tokenize(ex.question, p, vocab, budget);
    AnswerTarget target;
    target.cls = ClassFor(ex.answer.type);
    if (target.cls == AnswerClass::kSpan) {
      auto anchor = FindAnswerSentence(ex);
      auto chars = LocateAnswer(p, ex.answer, anchor);
      if (!chars) return 0.0;
      auto tokens = enc.MapSpan(*chars);
      if (!tokens) return 0.0;
      target.start = tokens->first;
      target.end = tokens->second;
    }
    return AnswerConfidence(model.Forward(enc.ids), target, Head::kTarget);
  };
}

ConfidenceCurves ComputeConfidenceCurves(
    const std::vector<MultiHopExample>& dev, const SubsetConfidenceFn& conf) {
  ConfidenceCurves c;
  const int n = static_cast<int>(dev.size());
  std::vector<std::optional<std::pair<double, double>>> values(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const auto& ex = dev[i];
    auto s_star = FindAnswerSentence(ex);
    if (!ex.gold_evidence || ex.gold_evidence->empty() || !s_star) continue;
    std::vector<SentenceRef> gold(ex.gold_evidence->begin(),
                                  ex.gold_evidence->end());
    values[i] = std::make_pair(conf(ex, gold), conf(ex, {*s_star}));
  }
  for (const auto& v : values) {
    if (!v) {
      ++c.n_skipped;
      continue;
    }
    c.plus.push_back(v->first);
    c.minus.push_back(v->second);
  }
  c.mean_plus = Mean(c.plus);
  c.mean_minus = Mean(c.minus);
  std::sort(c.plus.begin(), c.plus.end());
  std::sort(c.minus.begin(), c.minus.end());
  return c;
}

std::string CurvesCsv(const ConfidenceCurves& c) {
  std::string out = "index,confidence,set\n";
  for (size_t i = 0; i < c.plus.size(); ++i) {
    out += fmt::format("{},{:.10g},E+\n", i, c.plus[i]);
  }
  for (size_t i = 0; i < c.minus.size(); ++i) {
    out += fmt::format("{},{:.10g},E-\n", i, c.minus[i]);
  }
  return out;
}

std::string CurvesSvg(const ConfidenceCurves& c) {
  constexpr double kW = 480, kH = 320, kPad = 40;
  auto polyline = [&](const std::vector<double>& v, const char* color) {
    std::string pts;
    for (size_t i = 0; i < v.size(); ++i) {
      double x = kPad + (v.size() > 1 ? i / double(v.size() - 1) : 0.0) *
                            (kW - 2 * kPad);
      double y = kH - kPad - v[i] * (kH - 2 * kPad);
      pts += fmt::format("{:.1f},{:.1f} ", x, y);
    }
    return fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" "
        "points=\"{}\"/>\n",
        color, pts);
  };
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" "
      "height=\"{1}\">\n<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      kW, kH);
  svg += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{0}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n",
      kPad, kH - kPad, kW - kPad);
  svg += polyline(c.plus, "#1f77b4");
  svg += polyline(c.minus, "#d62728");
  svg += fmt::format(
      "<text x=\"{}\" y=\"20\" font-size=\"12\">E+ mean {:.3f} (blue), "
      "E- mean {:.3f} (red)</text>\n</svg>\n",
      kPad, c.mean_plus, c.mean_minus);
  return svg;
}

json CurvesSummary(const ConfidenceCurves& c) {
  return {{"n_plus", c.plus.size()},   {"n_minus", c.minus.size()},
          {"mean_plus", c.mean_plus},  {"mean_minus", c.mean_minus},
          {"gap", c.gap()},            {"n_skipped", c.n_skipped}};
}

EvalReport Evaluate(const std::vector<MultiHopExample>& dev,
                    const std::vector<PredictionRecord>& predictions,
                    const std::set<std::string>* challenge) {
  std::map<std::string, const PredictionRecord*> by_qid;
  for (const auto& p : predictions) by_qid[p.qid] = &p;
  EvalReport r;
  std::vector<double> f1, em, ev_p, ev_r, ev_f, ch_f1, ch_em;
  for (const auto& ex : dev) {
    ExampleScore s;
    s.qid = ex.qid;
    auto it = by_qid.find(ex.qid);
    if (it == by_qid.end()) {
      ++r.n_missing;
    } else {
      const auto& pred = *it->second;
      s.f1 = QaF1(pred.prediction.answer_text, ex.answer.text);
      s.em = QaExactMatch(pred.prediction.answer_text, ex.answer.text);
      if (ex.gold_evidence && !ex.gold_evidence->empty()) {
        SentenceSet units(pred.selected_units.begin(),
                          pred.selected_units.end());
        s.evidence = EvidencePrf(units, *ex.gold_evidence);
        ev_p.push_back(s.evidence->precision);
        ev_r.push_back(s.evidence->recall);
        ev_f.push_back(s.evidence->f1);
      }
    }
    f1.push_back(s.f1);
    em.push_back(s.em);
    if (challenge) {
      bool in = challenge->count(ex.qid) > 0;
      s.in_challenge = in;
      r.challenge_membership[ex.qid] = in;
      if (in) {
        ch_f1.push_back(s.f1);
        ch_em.push_back(s.em);
      }
    }
    r.per_example.push_back(std::move(s));
  }
  r.n_examples = static_cast<int>(dev.size());
  r.qa_f1 = Mean(f1);
  r.qa_em = Mean(em);
  r.evidence_prf = {Mean(ev_p), Mean(ev_r), Mean(ev_f)};
  if (challenge) {
    r.challenge_f1 = Mean(ch_f1);
    r.challenge_em = Mean(ch_em);
  }
  return r;
}

json ReportToJson(const EvalReport& r) {
  json j = {{"qa_f1", r.qa_f1},
            {"qa_em", r.qa_em},
            {"evidence_prf",
             {{"precision", r.evidence_prf.precision},
              {"recall", r.evidence_prf.recall},
              {"f1", r.evidence_prf.f1}}},
            {"n_examples", r.n_examples},
            {"n_missing", r.n_missing}};
  if (r.challenge_f1) {
    int n = 0;
    for (const auto& [qid, in] : r.challenge_membership) n += in;
    j["challenge"] = {{"n_examples", n},
                      {"qa_f1", *r.challenge_f1},
                      {"qa_em", *r.challenge_em}};
  }
  return j;
}

std::string PerExampleCsv(const EvalReport& r) {
  std::string out = "qid,f1,em,evidence_p,evidence_r,evidence_f1,challenge\n";
  for (const auto& s : r.per_example) {
    std::string ev = ",,";
    if (s.evidence) {
      ev = fmt::format("{:.6g},{:.6g},{:.6g}", s.evidence->precision,
                       s.evidence->recall, s.evidence->f1);
    }
    std::string ch = s.in_challenge ? (*s.in_challenge ? "1" : "0") : "";
    out += fmt::format("{},{:.6g},{:.6g},{},{}\n", s.qid, s.f1, s.em, ev, ch);
  }
  return out;
}

}  // namespace pseudoev
