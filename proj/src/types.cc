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

#include "pseudoev/types.h"

#include <algorithm>
#include <cctype>

namespace pseudoev {

std::string_view ToString(AnswerType t) {
  switch (t) {
    case AnswerType::kSpan: return "span";
    case AnswerType::kYes: return "yes";
    case AnswerType::kNo: return "no";
  }
  return "span";
}

std::string_view ToString(Polarity p) {
  return p == Polarity::kPositive ? "positive" : "negative";
}

std::string_view ToString(AnswerClass c) {
  switch (c) {
    case AnswerClass::kSpan: return "span";
    case AnswerClass::kYes: return "yes";
    case AnswerClass::kNo: return "no";
    case AnswerClass::kNone: return "none";
  }
  return "none";
}

AnswerType ParseAnswerType(std::string_view s) {
  if (s == "span") return AnswerType::kSpan;
  if (s == "yes") return AnswerType::kYes;
  if (s == "no") return AnswerType::kNo;
  throw DataError("unknown answer type '" + std::string(s) + "'");
}

Polarity ParsePolarity(std::string_view s) {
  if (s == "positive") return Polarity::kPositive;
  if (s == "negative") return Polarity::kNegative;
  throw DataError("unknown polarity '" + std::string(s) + "'");
}

AnswerClass ParseAnswerClass(std::string_view s) {
  if (s == "span") return AnswerClass::kSpan;
  if (s == "yes") return AnswerClass::kYes;
  if (s == "no") return AnswerClass::kNo;
  if (s == "none") return AnswerClass::kNone;
  throw DataError("unknown answer class '" + std::string(s) + "'");
}

AnswerClass ClassFor(AnswerType t) {
  switch (t) {
    case AnswerType::kSpan: return AnswerClass::kSpan;
    case AnswerType::kYes: return AnswerClass::kYes;
    case AnswerType::kNo: return AnswerClass::kNo;
  }
  return AnswerClass::kSpan;
}

std::vector<int> MultiHopExample::PositivePids() const {
  std::vector<int> out;
  for (const auto& p : paragraphs) {
    if (p.polarity == Polarity::kPositive) out.push_back(p.pid);
  }
  return out;
}

std::vector<int> MultiHopExample::NegativePids() const {
  std::vector<int> out;
  for (const auto& p : paragraphs) {
    if (p.polarity == Polarity::kNegative) out.push_back(p.pid);
  }
  return out;
}

const Sentence& MultiHopExample::At(SentenceRef ref) const {
  if (ref.pid < 0 || ref.pid >= static_cast<int>(paragraphs.size())) {
    throw DataError(qid + ": paragraph " + std::to_string(ref.pid) +
                    " out of range");
  }
  const auto& sents = paragraphs[ref.pid].sentences;
  if (ref.sid < 0 || ref.sid >= static_cast<int>(sents.size())) {
    throw DataError(qid + ": sentence " + std::to_string(ref.pid) + ":" +
                    std::to_string(ref.sid) + " out of range");
  }
  return sents[ref.sid];
}

namespace {

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

void ValidateExample(const MultiHopExample& ex, bool require_pair) {
  auto fail = [&](const std::string& what) {
    throw DataError(ex.qid + ": " + what);
  };
  if (ex.paragraphs.empty()) fail("no paragraphs");
  int positives = 0;
  for (size_t i = 0; i < ex.paragraphs.size(); ++i) {
    const auto& p = ex.paragraphs[i];
    if (p.pid != static_cast<int>(i)) fail("paragraph ids not contiguous");
    if (p.sentences.empty()) fail("paragraph " + std::to_string(i) + " empty");
    for (size_t j = 0; j < p.sentences.size(); ++j) {
      if (p.sentences[j].sid != static_cast<int>(j)) {
        fail("sentence ids not contiguous in paragraph " + std::to_string(i));
      }
      if (IsBlank(p.sentences[j].text)) {
        fail("blank sentence " + std::to_string(i) + ":" + std::to_string(j));
      }
    }
    if (p.polarity == Polarity::kPositive) ++positives;
  }
  if (require_pair && positives != 2) {
    fail("expected 2 positive paragraphs, found " + std::to_string(positives));
  }
  if (ex.answer.type == AnswerType::kSpan) {
    if (ex.answer.text.empty()) fail("span answer with empty text");
    bool found = false;
    for (const auto& p : ex.paragraphs) {
      if (p.polarity != Polarity::kPositive) continue;
      for (const auto& s : p.sentences) {
        if (s.text.find(ex.answer.text) != std::string::npos) found = true;
      }
    }
    if (!found) fail("answer not found in a positive paragraph");
  }
  if (ex.gold_evidence) {
    for (const auto& ref : *ex.gold_evidence) {
      ex.At(ref);
      if (ex.paragraphs[ref.pid].polarity != Polarity::kPositive) {
        fail("gold evidence in negative paragraph " + std::to_string(ref.pid));
      }
    }
  }
}

CharSpan Passage::UnitSpan(int k) const {
  int begin = sentence_boundaries[k];
  int end = sentence_boundaries[k + 1];
  if (k + 1 < size()) --end;  // separator
  return {begin, end};
}

std::string_view Passage::UnitText(int k) const {
  CharSpan s = UnitSpan(k);
  return std::string_view(resolved_text).substr(s.begin, s.end - s.begin);
}

int Passage::UnitAt(int offset) const {
  auto it = std::upper_bound(sentence_boundaries.begin(),
                             sentence_boundaries.end(), offset);
  int k = static_cast<int>(it - sentence_boundaries.begin()) - 1;
  if (k < 0 || k >= size()) return -1;
  return k;
}

int Passage::IndexOf(SentenceRef ref) const {
  auto it = std::find(units.begin(), units.end(), ref);
  return it == units.end() ? -1 : static_cast<int>(it - units.begin());
}

Passage MakePassage(const MultiHopExample& ex,
                    const std::vector<SentenceRef>& refs) {
  Passage p;
  p.units = refs;
  p.sentence_boundaries.assign(1, 0);
  for (size_t k = 0; k < refs.size(); ++k) {
    if (k > 0) p.resolved_text.push_back(' ');
    p.resolved_text += ex.At(refs[k]).text;
    // The next boundary sits after the separator, except for the last unit.
    int next = static_cast<int>(p.resolved_text.size());
    if (k + 1 < refs.size()) ++next;
    p.sentence_boundaries.push_back(next);
  }
  return p;
}

std::vector<SentenceRef> ParagraphUnits(const MultiHopExample& ex,
                                        const std::vector<int>& pids) {
  std::vector<SentenceRef> refs;
  for (int pid : pids) {
    const auto& para = ex.paragraphs.at(pid);
    for (const auto& s : para.sentences) refs.push_back({pid, s.sid});
  }
  return refs;
}

}  // namespace pseudoev
