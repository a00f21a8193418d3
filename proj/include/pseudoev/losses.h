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

// Per-instance training objectives. Each function returns the loss value
// and, when `grad` is non-null, adds d(loss)/d(logits) into it.

#ifndef PSEUDOEV_LOSSES_H_
#define PSEUDOEV_LOSSES_H_

#include "pseudoev/qa_model.h"

namespace pseudoev {

inline constexpr double kLogEpsilon = 1e-12;

// log(max(p, eps)); bumps *n_clamped when the floor is hit.
double ClampedLog(double p, int* n_clamped);

// Cross entropy of the target head and the class head:
//   span    -(log Ps[s] + log Pe[e]) - log Pcls[span]
//   yes/no  -log Pcls[c]
//   none    -log Pcls[none]
double AnswerLoss(const ModelOutput& out, const AnswerTarget& target,
                  HeadGradients* grad = nullptr, int* n_clamped = nullptr);

// KL(Ps || U) + KL(Pe || U), U uniform over the span mask.
double UniformKl(const ModelOutput& out, HeadGradients* grad = nullptr);

struct BiasTerms {
  double ce = 0.0;  // CE(P_hat, A) on the biased head
  double kl = 0.0;  // KL(Ps_hat || Ps) + KL(Pe_hat || Pe)
  double value = 0.0;  // ce - lambda * kl
};

// CE(P_hat, A) - lambda * [KL(Ps_hat || Ps) + KL(Pe_hat || Pe)] with P_hat
// held constant inside the KL. Span targets only; other classes give 0.
BiasTerms BiasDecorrelation(const ModelOutput& out, const AnswerTarget& target,
                            double lambda, HeadGradients* grad = nullptr,
                            int* n_clamped = nullptr);

}  // namespace pseudoev

#endif  // PSEUDOEV_LOSSES_H_
