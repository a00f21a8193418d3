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

// Span-extraction QA model: a shared encoder feeding
//   f  target start/end head   (f_head.*)
//   g  biased start/end head   (g_head.*)
//   a 4-way answer-type head on the [CLS] state (cls_head.*)
// The two span heads share nothing but the encoder output.

#ifndef PSEUDOEV_QA_MODEL_H_
#define PSEUDOEV_QA_MODEL_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pseudoev/encoder.h"
#include "pseudoev/params.h"
#include "pseudoev/setgen.h"
#include "pseudoev/tokenizer.h"
#include "pseudoev/types.h"

namespace pseudoev {

// The gold answer span does not fit in the token budget.
class TruncatedAnswer : public DataError {
 public:
  using DataError::DataError;
};

enum class Head { kTarget, kBiased };

struct ModelOutput {
  Matrix hidden;                       // n x d
  Vector start, end;                   // target head, over n positions
  Vector start_hat, end_hat;           // biased head
  Vector cls;                          // [p_span, p_yes, p_no, p_none]
  std::vector<char> span_mask;         // positions carrying span mass

  int size() const { return static_cast<int>(start.size()); }
  int NumValid() const;
};

// d(loss)/d(logits) for each head. Positions outside the span mask must be
// zero.
struct HeadGradients {
  Vector start, end, start_hat, end_hat, cls;
  // Also route the biased-head gradient into the encoder.
  bool biased_to_encoder = false;

  static HeadGradients Zero(int n);
  HeadGradients& operator+=(const HeadGradients& other);
};

// Positions strictly between the first [SEP] and [EOS], excluding [PAD]
// and [S]. With no such position, the [EOS] slot (or the last position)
// carries all span mass.
std::vector<char> SpanMask(std::span<const int> tokens);

// Supervision in token coordinates.
struct AnswerTarget {
  AnswerClass cls = AnswerClass::kSpan;
  int start = -1;  // inclusive token indices, span class only
  int end = -1;
};

// nullopt when the span is truncated away or missing.
std::optional<AnswerTarget> MakeTarget(const TrainingInstance& inst,
                                       const EncodedInput& enc);

class QaModel {
 public:
  struct Cache {
    Encoder::Cache encoder;
  };

  QaModel(const EncoderConfig& config, uint64_t seed);

  ModelOutput Forward(std::span<const int> tokens) const;
  ModelOutput Forward(std::span<const int> tokens, Cache* cache) const;
  // Accumulates parameter gradients into *grad (layout-sized).
  void Backward(const Cache& cache, const HeadGradients& dlogits,
                std::vector<double>* grad) const;

  const EncoderConfig& config() const { return encoder_.config(); }
  const ParamLayout& layout() const { return layout_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Parameter groups: "encoder", "f_head", "g_head", "cls_head".
  std::vector<std::pair<size_t, size_t>> GroupRanges(
      std::string_view group) const;

  void Save(const std::string& path, const Vocabulary& vocab) const;
  static std::pair<QaModel, Vocabulary> Load(const std::string& path);

 private:
  ParamLayout layout_;
  Encoder encoder_;
  ParamSlot f_start_w_, f_start_b_, f_end_w_, f_end_b_;
  ParamSlot g_start_w_, g_start_b_, g_end_w_, g_end_b_;
  ParamSlot cls_w_, cls_b_;
  std::vector<double> params_;
};

// P(A|Q,D): product of the chosen head's start/end probabilities at the
// gold span, or the class probability for yes/no.
double AnswerConfidence(const ModelOutput& out, const AnswerTarget& target,
                        Head head);

struct Prediction {
  std::string answer_text;
  std::optional<CharSpan> span;
  std::optional<std::pair<int, int>> token_span;
  AnswerClass cls = AnswerClass::kNone;
  double confidence = 0.0;
};

// Class by argmax; for span, the (s, e) with s <= e <= s + max_span_len
// maximizing start[s] * end[e], ties to the smaller (s, e). Fills
// answer_text only for yes/no.
Prediction Decode(const ModelOutput& out, int max_span_len);
// Resolves answer_text and the character span of a span prediction.
void ResolveAnswerText(const EncodedInput& enc, const Passage& passage,
                       Prediction* pred);

}  // namespace pseudoev

#endif  // PSEUDOEV_QA_MODEL_H_
