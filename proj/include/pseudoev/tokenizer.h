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

#ifndef PSEUDOEV_TOKENIZER_H_
#define PSEUDOEV_TOKENIZER_H_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pseudoev/types.h"

namespace pseudoev {

// Whitespace + punctuation split, lowercased. Offsets index into `text`.
struct RawToken {
  std::string text;
  CharSpan span;
};
std::vector<RawToken> SplitWords(std::string_view text);

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kCls = 2;
  static constexpr int kSep = 3;
  static constexpr int kEos = 4;
  static constexpr int kSentenceMarker = 5;
  static constexpr int kNumSpecial = 6;

  Vocabulary();
  // Deterministic: words are sorted before ids are assigned.
  static Vocabulary Build(const std::vector<MultiHopExample>& examples);
  static Vocabulary FromTokens(const std::vector<std::string>& tokens);

  int Id(std::string_view word) const;
  const std::string& Token(int id) const { return tokens_.at(id); }
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// [CLS] question [SEP] passage [EOS], optionally with [S] after every
// sentence. Trailing passage tokens are dropped to fit `budget`.
struct EncodedInput {
  std::vector<int> ids;
  int passage_begin = 0;  // first passage token
  int passage_end = 0;    // the [EOS] position
  // One entry per passage character; non-decreasing. Characters whose
  // token was truncated map to passage_end.
  std::vector<int> char_to_token;
  // Character span of each token in [passage_begin, passage_end);
  // markers get an empty span at the sentence end.
  std::vector<CharSpan> token_chars;
  // Marker position per passage unit, -1 if truncated. Empty unless markers.
  std::vector<int> marker_positions;
  int n_truncated = 0;

  int size() const { return static_cast<int>(ids.size()); }
  // Token span [start, end] (inclusive) of a passage character span, or
  // nullopt when any part falls outside the kept passage (TruncatedAnswer).
  std::optional<std::pair<int, int>> MapSpan(CharSpan chars) const;
  // Character span covered by passage tokens [start, end].
  CharSpan CharsOf(int start, int end) const;
};

// Throws UsageError if budget < question tokens + 3.
EncodedInput Tokenize(std::string_view question, const Passage& passage,
                      const Vocabulary& vocab, int budget,
                      bool sentence_markers = false);

}  // namespace pseudoev

#endif  // PSEUDOEV_TOKENIZER_H_
