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

#include "pseudoev/tokenizer.h"

#include <algorithm>
#include <cctype>
#include <set>

namespace pseudoev {

std::vector<RawToken> SplitWords(std::string_view text) {
  std::vector<RawToken> out;
  const int n = static_cast<int>(text.size());
  int i = 0;
  while (i < n) {
    unsigned char c = text[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::ispunct(c)) {
      out.push_back({std::string(1, static_cast<char>(c)), {i, i + 1}});
      ++i;
      continue;
    }
    int j = i;
    std::string word;
    while (j < n) {
      unsigned char d = text[j];
      if (std::isspace(d) || std::ispunct(d)) break;
      word.push_back(static_cast<char>(std::tolower(d)));
      ++j;
    }
    out.push_back({std::move(word), {i, j}});
    i = j;
  }
  return out;
}

Vocabulary::Vocabulary() {
  for (const char* s : {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[EOS]", "[S]"}) {
    index_.emplace(s, static_cast<int>(tokens_.size()));
    tokens_.emplace_back(s);
  }
}

Vocabulary Vocabulary::Build(const std::vector<MultiHopExample>& examples) {
  std::set<std::string> words;
  auto add = [&](std::string_view text) {
    for (auto& t : SplitWords(text)) words.insert(std::move(t.text));
  };
  for (const auto& ex : examples) {
    add(ex.question);
    for (const auto& p : ex.paragraphs) {
      for (const auto& s : p.sentences) add(s.text);
    }
  }
  Vocabulary v;
  for (const auto& w : words) {
    if (v.index_.count(w)) continue;
    v.index_.emplace(w, static_cast<int>(v.tokens_.size()));
    v.tokens_.push_back(w);
  }
  return v;
}

Vocabulary Vocabulary::FromTokens(const std::vector<std::string>& tokens) {
  Vocabulary v;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i < static_cast<size_t>(kNumSpecial)) {
      if (tokens[i] != v.tokens_[i]) {
        throw DataError("vocabulary: special token mismatch at " +
                        std::to_string(i));
      }
      continue;
    }
    if (!v.index_.emplace(tokens[i], static_cast<int>(i)).second) {
      throw DataError("vocabulary: duplicate token '" + tokens[i] + "'");
    }
    v.tokens_.push_back(tokens[i]);
  }
  return v;
}

int Vocabulary::Id(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? kUnk : it->second;
}

std::optional<std::pair<int, int>> EncodedInput::MapSpan(CharSpan chars) const {
  if (chars.begin < 0 || chars.end <= chars.begin ||
      chars.end > static_cast<int>(char_to_token.size())) {
    return std::nullopt;
  }
  int s = char_to_token[chars.begin];
  int e = char_to_token[chars.end - 1];
  if (s >= passage_end || e >= passage_end) return std::nullopt;
  return std::make_pair(s, e);
}

CharSpan EncodedInput::CharsOf(int start, int end) const {
  return {token_chars[start - passage_begin].begin,
          token_chars[end - passage_begin].end};
}

EncodedInput Tokenize(std::string_view question, const Passage& passage,
                      const Vocabulary& vocab, int budget,
                      bool sentence_markers) {
  auto q_tokens = SplitWords(question);
  const int q_len = static_cast<int>(q_tokens.size());
  if (budget < q_len + 3) {
    throw UsageError("token budget " + std::to_string(budget) +
                     " cannot hold a question of " + std::to_string(q_len) +
                     " tokens");
  }
  EncodedInput enc;
  enc.ids.reserve(budget);
  enc.ids.push_back(Vocabulary::kCls);
  for (const auto& t : q_tokens) enc.ids.push_back(vocab.Id(t.text));
  enc.ids.push_back(Vocabulary::kSep);
  enc.passage_begin = static_cast<int>(enc.ids.size());

  const int room = budget - q_len - 3;
  auto p_tokens = SplitWords(passage.resolved_text);

  // Passage token stream, markers interleaved after each unit.
  struct Piece {
    int id;
    CharSpan chars;
    int unit;  // for markers: the unit they close; -1 otherwise
  };
  std::vector<Piece> pieces;
  pieces.reserve(p_tokens.size() + passage.size());
  size_t t = 0;
  for (int k = 0; k < passage.size(); ++k) {
    CharSpan unit = passage.UnitSpan(k);
    while (t < p_tokens.size() && p_tokens[t].span.begin < unit.end) {
      pieces.push_back({vocab.Id(p_tokens[t].text), p_tokens[t].span, -1});
      ++t;
    }
    if (sentence_markers) {
      pieces.push_back({Vocabulary::kSentenceMarker, {unit.end, unit.end}, k});
    }
  }
  const int kept = std::min<int>(room, static_cast<int>(pieces.size()));
  enc.n_truncated = static_cast<int>(pieces.size()) - kept;
  if (sentence_markers) enc.marker_positions.assign(passage.size(), -1);
  for (int i = 0; i < kept; ++i) {
    enc.ids.push_back(pieces[i].id);
    enc.token_chars.push_back(pieces[i].chars);
    if (pieces[i].unit >= 0) {
      enc.marker_positions[pieces[i].unit] = enc.passage_begin + i;
    }
  }
  enc.passage_end = static_cast<int>(enc.ids.size());
  enc.ids.push_back(Vocabulary::kEos);

  // Character alignment: a character maps to the first kept word token
  // ending after it; past the kept region it maps to passage_end.
  const int n_chars = static_cast<int>(passage.resolved_text.size());
  enc.char_to_token.assign(n_chars, enc.passage_end);
  int tok = 0;
  for (int c = 0; c < n_chars; ++c) {
    while (tok < kept && (pieces[tok].unit >= 0 || pieces[tok].chars.end <= c)) {
      ++tok;
    }
    if (tok >= kept) break;
    enc.char_to_token[c] = enc.passage_begin + tok;
  }
  return enc;
}

}  // namespace pseudoev
