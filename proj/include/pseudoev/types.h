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

#ifndef PSEUDOEV_TYPES_H_
#define PSEUDOEV_TYPES_H_

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pseudoev {

// Input or corpus content is invalid. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad command line or configuration. Maps to CLI exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AnswerType { kSpan, kYes, kNo };
enum class Polarity { kPositive, kNegative };

// Output classes of the answer-type head, in head order.
enum class AnswerClass { kSpan = 0, kYes = 1, kNo = 2, kNone = 3 };
inline constexpr int kNumClasses = 4;

std::string_view ToString(AnswerType t);
std::string_view ToString(Polarity p);
std::string_view ToString(AnswerClass c);
AnswerType ParseAnswerType(std::string_view s);
Polarity ParsePolarity(std::string_view s);
AnswerClass ParseAnswerClass(std::string_view s);
AnswerClass ClassFor(AnswerType t);

// (pid, sid) reference to one sentence of an example.
struct SentenceRef {
  int pid = 0;
  int sid = 0;
  auto operator<=>(const SentenceRef&) const = default;
};

using SentenceSet = std::set<SentenceRef>;

// Half-open character span [begin, end).
struct CharSpan {
  int begin = 0;
  int end = 0;
  auto operator<=>(const CharSpan&) const = default;
};

struct Sentence {
  int sid = 0;
  std::string text;
};

struct Paragraph {
  int pid = 0;
  std::string title;
  std::vector<Sentence> sentences;
  Polarity polarity = Polarity::kNegative;
};

struct Answer {
  std::string text;
  AnswerType type = AnswerType::kSpan;
};

struct MultiHopExample {
  std::string qid;
  std::string question;
  Answer answer;
  std::vector<Paragraph> paragraphs;
  // Evaluation only; never used as training supervision.
  std::optional<SentenceSet> gold_evidence;

  std::vector<int> PositivePids() const;
  std::vector<int> NegativePids() const;
  const Sentence& At(SentenceRef ref) const;
};

// Throws DataError naming the qid and the violated rule.
// `require_pair` enforces the two-positive-paragraph rule of distractor data.
void ValidateExample(const MultiHopExample& ex, bool require_pair = true);

// A concatenation of referenced sentences joined by a single space.
struct Passage {
  std::vector<SentenceRef> units;
  std::string resolved_text;
  // units.size() + 1 offsets; unit k occupies
  // [boundaries[k], boundaries[k+1]) minus the trailing separator.
  std::vector<int> sentence_boundaries{0};

  int size() const { return static_cast<int>(units.size()); }
  bool empty() const { return units.empty(); }
  CharSpan UnitSpan(int k) const;
  std::string_view UnitText(int k) const;
  // Index of the unit containing character `offset`, or -1.
  int UnitAt(int offset) const;
  // Index of `ref` in units, or -1.
  int IndexOf(SentenceRef ref) const;
};

// Builds a passage from `refs` in the given order.
Passage MakePassage(const MultiHopExample& ex,
                    const std::vector<SentenceRef>& refs);

// All sentence refs of the listed paragraphs, paragraph order preserved.
std::vector<SentenceRef> ParagraphUnits(const MultiHopExample& ex,
                                        const std::vector<int>& pids);

}  // namespace pseudoev

#endif  // PSEUDOEV_TYPES_H_
