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

#include "pseudoev/qa_model.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pseudoev/checkpoint.h"

namespace pseudoev {

namespace {

constexpr double kHeadInitStd = 0.02;

// Softmax over mask positions; exactly zero elsewhere.
Vector MaskedSoftmax(const Vector& logits, const std::vector<char>& mask) {
  const int n = static_cast<int>(logits.size());
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (mask[i]) mx = std::max(mx, logits(i));
  }
  Vector p = Vector::Zero(n);
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    p(i) = std::exp(logits(i) - mx);
    z += p(i);
  }
  return p / z;
}

Vector Softmax(const Vector& logits) {
  Vector p = (logits.array() - logits.maxCoeff()).exp();
  return p / p.sum();
}

}  // namespace

int ModelOutput::NumValid() const {
  return static_cast<int>(std::count(span_mask.begin(), span_mask.end(), 1));
}

HeadGradients HeadGradients::Zero(int n) {
  HeadGradients g;
  g.start = Vector::Zero(n);
  g.end = Vector::Zero(n);
  g.start_hat = Vector::Zero(n);
  g.end_hat = Vector::Zero(n);
  g.cls = Vector::Zero(kNumClasses);
  return g;
}

HeadGradients& HeadGradients::operator+=(const HeadGradients& other) {
  start += other.start;
  end += other.end;
  start_hat += other.start_hat;
  end_hat += other.end_hat;
  cls += other.cls;
  biased_to_encoder = biased_to_encoder || other.biased_to_encoder;
  return *this;
}

std::vector<char> SpanMask(std::span<const int> tokens) {
  const int n = static_cast<int>(tokens.size());
  std::vector<char> mask(n, 0);
  int sep = -1, eos = -1;
  for (int i = 0; i < n; ++i) {
    if (sep < 0 && tokens[i] == Vocabulary::kSep) {
      sep = i;
    } else if (sep >= 0 && tokens[i] == Vocabulary::kEos) {
      eos = i;
      break;
    }
  }
  int any = 0;
  if (sep >= 0) {
    int stop = eos >= 0 ? eos : n;
    for (int i = sep + 1; i < stop; ++i) {
      int id = tokens[i];
      if (id == Vocabulary::kPad || id == Vocabulary::kSentenceMarker) continue;
      mask[i] = 1;
      ++any;
    }
  }
  if (!any && n > 0) mask[eos >= 0 ? eos : n - 1] = 1;
  return mask;
}

std::optional<AnswerTarget> MakeTarget(const TrainingInstance& inst,
                                       const EncodedInput& enc) {
  AnswerTarget t;
  t.cls = inst.class_label;
  if (t.cls != AnswerClass::kSpan) return t;
  if (!inst.answer_span) return std::nullopt;
  auto tokens = enc.MapSpan(*inst.answer_span);
  if (!tokens) return std::nullopt;
  t.start = tokens->first;
  t.end = tokens->second;
  return t;
}

QaModel::QaModel(const EncoderConfig& config, uint64_t seed)
    : encoder_(config, "encoder", &layout_) {
  const int d = config.hidden_dim;
  auto add = [&](const std::string& name, int rows, int cols) {
    return layout_.slot(layout_.Add(name, rows, cols));
  };
  f_start_w_ = add("f_head.start_w", 1, d);
  f_start_b_ = add("f_head.start_b", 1, 1);
  f_end_w_ = add("f_head.end_w", 1, d);
  f_end_b_ = add("f_head.end_b", 1, 1);
  g_start_w_ = add("g_head.start_w", 1, d);
  g_start_b_ = add("g_head.start_b", 1, 1);
  g_end_w_ = add("g_head.end_w", 1, d);
  g_end_b_ = add("g_head.end_b", 1, 1);
  cls_w_ = add("cls_head.w", kNumClasses, d);
  cls_b_ = add("cls_head.b", 1, kNumClasses);

  params_.assign(layout_.total(), 0.0);
  NormalSampler normal(seed);
  encoder_.Init(&params_, &normal);
  for (const ParamSlot* s : {&f_start_w_, &f_end_w_, &g_start_w_, &g_end_w_,
                             &cls_w_}) {
    auto m = View(params_, *s);
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) m(i, j) = kHeadInitStd * normal.Next();
    }
  }
}

ModelOutput QaModel::Forward(std::span<const int> tokens) const {
  Cache cache;
  return Forward(tokens, &cache);
}

ModelOutput QaModel::Forward(std::span<const int> tokens, Cache* cache) const {
  encoder_.Forward(tokens, params_, &cache->encoder);
  const Matrix& h = cache->encoder.h;
  ModelOutput out;
  out.span_mask = SpanMask(tokens);
  auto logits = [&](const ParamSlot& w, const ParamSlot& b) -> Vector {
    Vector z = h * View(params_, w).row(0).transpose();
    z.array() += View(params_, b)(0, 0);
    return z;
  };
  out.start = MaskedSoftmax(logits(f_start_w_, f_start_b_), out.span_mask);
  out.end = MaskedSoftmax(logits(f_end_w_, f_end_b_), out.span_mask);
  out.start_hat = MaskedSoftmax(logits(g_start_w_, g_start_b_), out.span_mask);
  out.end_hat = MaskedSoftmax(logits(g_end_w_, g_end_b_), out.span_mask);
  Vector cls_logits = View(params_, cls_w_) * h.row(0).transpose();
  cls_logits += View(params_, cls_b_).row(0).transpose();
  out.cls = Softmax(cls_logits);
  out.hidden = h;
  return out;
}

void QaModel::Backward(const Cache& cache, const HeadGradients& dl,
                       std::vector<double>* grad) const {
  const Matrix& h = cache.encoder.h;
  Matrix dh = Matrix::Zero(h.rows(), h.cols());
  auto linear = [&](const Vector& dz, const ParamSlot& w, const ParamSlot& b,
                    bool to_encoder) {
    if (dz.isZero(0.0)) return;
    View(*grad, w).row(0) += dz.transpose() * h;
    View(*grad, b)(0, 0) += dz.sum();
    if (to_encoder) dh += dz * View(params_, w).row(0);
  };
  linear(dl.start, f_start_w_, f_start_b_, true);
  linear(dl.end, f_end_w_, f_end_b_, true);
  linear(dl.start_hat, g_start_w_, g_start_b_, dl.biased_to_encoder);
  linear(dl.end_hat, g_end_w_, g_end_b_, dl.biased_to_encoder);
  if (!dl.cls.isZero(0.0)) {
    View(*grad, cls_w_) += dl.cls * h.row(0);
    View(*grad, cls_b_).row(0) += dl.cls.transpose();
    dh.row(0) += dl.cls.transpose() * View(params_, cls_w_);
  }
  if (dh.isZero(0.0)) return;
  encoder_.Backward(dh, cache.encoder, params_, grad);
}

std::vector<std::pair<size_t, size_t>> QaModel::GroupRanges(
    std::string_view group) const {
  return layout_.Ranges(std::string(group) + ".");
}

void QaModel::Save(const std::string& path, const Vocabulary& vocab) const {
  CheckpointData data;
  data.kind = "qa";
  data.encoder = config();
  data.vocab = vocab.tokens();
  data.slots = layout_.slots();
  data.values = params_;
  WriteCheckpoint(path, data);
}

std::pair<QaModel, Vocabulary> QaModel::Load(const std::string& path) {
  CheckpointData data = ReadCheckpoint(path);
  if (data.kind != "qa") {
    throw DataError(path + ": expected a qa checkpoint, found " + data.kind);
  }
  QaModel model(data.encoder, 0);
  CheckLayout(data, model.layout_);
  model.params_ = std::move(data.values);
  return {std::move(model), Vocabulary::FromTokens(data.vocab)};
}

double AnswerConfidence(const ModelOutput& out, const AnswerTarget& target,
                        Head head) {
  switch (target.cls) {
    case AnswerClass::kSpan: {
      const Vector& s = head == Head::kTarget ? out.start : out.start_hat;
      const Vector& e = head == Head::kTarget ? out.end : out.end_hat;
      if (target.start < 0 || target.end < 0 || target.start >= out.size() ||
          target.end >= out.size()) {
        throw TruncatedAnswer("answer span outside the encoded input");
      }
      return s(target.start) * e(target.end);
    }
    case AnswerClass::kYes: return out.cls(1);
    case AnswerClass::kNo: return out.cls(2);
    case AnswerClass::kNone: return out.cls(3);
  }
  return 0.0;
}

Prediction Decode(const ModelOutput& out, int max_span_len) {
  Prediction pred;
  int best_cls = 0;
  for (int c = 1; c < kNumClasses; ++c) {
    if (out.cls(c) > out.cls(best_cls)) best_cls = c;
  }
  pred.cls = static_cast<AnswerClass>(best_cls);
  switch (pred.cls) {
    case AnswerClass::kYes:
      pred.answer_text = "yes";
      pred.confidence = out.cls(1);
      return pred;
    case AnswerClass::kNo:
      pred.answer_text = "no";
      pred.confidence = out.cls(2);
      return pred;
    case AnswerClass::kNone:
      pred.confidence = out.cls(3);
      return pred;
    case AnswerClass::kSpan:
      break;
  }
  const int n = out.size();
  double best = -1.0;
  int bs = -1, be = -1;
  for (int s = 0; s < n; ++s) {
    if (!out.span_mask[s]) continue;
    const int last = std::min(n - 1, s + max_span_len);
    for (int e = s; e <= last; ++e) {
      if (!out.span_mask[e]) continue;
      double score = out.start(s) * out.end(e);
      if (score > best) {
        best = score;
        bs = s;
        be = e;
      }
    }
  }
  if (bs >= 0) {
    pred.token_span = std::make_pair(bs, be);
    pred.confidence = best;
  }
  return pred;
}

void ResolveAnswerText(const EncodedInput& enc, const Passage& passage,
                       Prediction* pred) {
  if (pred->cls != AnswerClass::kSpan || !pred->token_span) return;
  auto [s, e] = *pred->token_span;
  if (s < enc.passage_begin || e >= enc.passage_end) return;
  CharSpan chars = enc.CharsOf(s, e);
  pred->span = chars;
  pred->answer_text =
      passage.resolved_text.substr(chars.begin, chars.end - chars.begin);
}

}  // namespace pseudoev
