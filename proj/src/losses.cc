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

#include "pseudoev/losses.h"

#include <cmath>

namespace pseudoev {

namespace {

// Softmax cross entropy at `index`: value, logit gradient P - onehot.
double SoftmaxCe(const Vector& p, int index, Vector* grad, int* n_clamped) {
  double loss = -ClampedLog(p(index), n_clamped);
  if (grad != nullptr) {
    *grad += p;
    (*grad)(index) -= 1.0;
  }
  return loss;
}

// KL(p || u) over mask with u uniform; logit gradient p_j (log p_j - H').
double KlToUniform(const Vector& p, const std::vector<char>& mask,
                   Vector* grad) {
  int m = 0;
  double plogp = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (!mask[i]) continue;
    ++m;
    if (p(i) > 0.0) plogp += p(i) * std::log(p(i));
  }
  if (grad != nullptr) {
    for (int i = 0; i < p.size(); ++i) {
      if (mask[i] && p(i) > 0.0) {
        (*grad)(i) += p(i) * (std::log(p(i)) - plogp);
      }
    }
  }
  return plogp + std::log(static_cast<double>(m));
}

// KL(q || p) over mask. Gradient w.r.t. the logits of p only: p - q.
double KlDetached(const Vector& q, const Vector& p,
                  const std::vector<char>& mask, Vector* grad, double scale,
                  int* n_clamped) {
  double kl = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (!mask[i] || q(i) <= 0.0) continue;
    kl += q(i) * (std::log(q(i)) - ClampedLog(p(i), n_clamped));
  }
  if (grad != nullptr) *grad += scale * (p - q);
  return kl;
}

}  // namespace

double ClampedLog(double p, int* n_clamped) {
  if (p < kLogEpsilon) {
    if (n_clamped != nullptr) ++*n_clamped;
    return std::log(kLogEpsilon);
  }
  return std::log(p);
}

double AnswerLoss(const ModelOutput& out, const AnswerTarget& target,
                  HeadGradients* grad, int* n_clamped) {
  double loss = SoftmaxCe(out.cls, static_cast<int>(target.cls),
                          grad ? &grad->cls : nullptr, n_clamped);
  if (target.cls == AnswerClass::kSpan) {
    if (target.start < 0 || target.end >= out.size()) {
      throw TruncatedAnswer("span target outside the encoded input");
    }
    loss += SoftmaxCe(out.start, target.start, grad ? &grad->start : nullptr,
                      n_clamped);
    loss += SoftmaxCe(out.end, target.end, grad ? &grad->end : nullptr,
                      n_clamped);
  }
  return loss;
}

double UniformKl(const ModelOutput& out, HeadGradients* grad) {
  return KlToUniform(out.start, out.span_mask, grad ? &grad->start : nullptr) +
         KlToUniform(out.end, out.span_mask, grad ? &grad->end : nullptr);
}

BiasTerms BiasDecorrelation(const ModelOutput& out, const AnswerTarget& target,
                            double lambda, HeadGradients* grad,
                            int* n_clamped) {
  BiasTerms t;
  if (target.cls != AnswerClass::kSpan) return t;
  if (target.start < 0 || target.end >= out.size()) {
    throw TruncatedAnswer("span target outside the encoded input");
  }
  t.ce = SoftmaxCe(out.start_hat, target.start,
                   grad ? &grad->start_hat : nullptr, n_clamped) +
         SoftmaxCe(out.end_hat, target.end, grad ? &grad->end_hat : nullptr,
                   n_clamped);
  t.kl = KlDetached(out.start_hat, out.start, out.span_mask,
                    grad ? &grad->start : nullptr, -lambda, n_clamped) +
         KlDetached(out.end_hat, out.end, out.span_mask,
                    grad ? &grad->end : nullptr, -lambda, n_clamped);
  t.value = t.ce - lambda * t.kl;
  return t;
}

}  // namespace pseudoev
