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

// Training objective and delayed curriculum.
//
//   L_total = sum_{A+, A-} L_A + sum_{E-} R_hat + u(t - K) sum_{E+} L_A
//
// with u(x) = 1 iff x > 0. Epochs 1..K see A+, A- and E-; at the end of
// epoch K the interpreter runs on a frozen snapshot over all A+ instances
// and its output joins training as E+.

#ifndef PSEUDOEV_TRAINER_H_
#define PSEUDOEV_TRAINER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pseudoev/interpreter.h"
#include "pseudoev/qa_model.h"
#include "pseudoev/setgen.h"
#include "pseudoev/tokenizer.h"

namespace pseudoev {

enum class Regularizer { kNone, kUniformKl, kBiasDecorrelate };
// paired: the set recipe above. single_paragraph: every paragraph on its own,
// labeled answerable iff it contains the answer.
enum class Regime { kPaired, kSingleParagraph };

std::string_view ToString(Regularizer r);
std::string_view ToString(Regime r);
Regularizer ParseRegularizer(std::string_view s);
Regime ParseRegime(std::string_view s);

struct TrainConfig {
  double lr = 1e-3;
  int batch_size = 8;
  int epochs_total = 6;
  int K = 3;
  double lambda = 0.01;
  Regularizer regularizer = Regularizer::kBiasDecorrelate;
  Regime regime = Regime::kPaired;
  bool use_eplus = true;
  bool biased_to_encoder = false;
  double clip_norm = 1.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int k_neg = 2;
  int token_budget = 128;
  uint64_t seed = 42;
  InterpreterConfig interpreter;
  EncoderConfig encoder;  // vocab_size and max_len are filled in

  void Validate() const;
};

struct LossBreakdown {
  double L_A = 0.0;     // over A+, A- and counted E+
  double R = 0.0;       // uniform KL over E-
  double R_hat = 0.0;   // bias decorrelation over E-
  double L_total = 0.0;
  int n_a_pos = 0;
  int n_a_neg = 0;
  int n_e_neg = 0;
  int n_e_pos = 0;
  int n_eplus_excluded = 0;  // E+ seen while t <= K
  int n_clamped = 0;

  LossBreakdown& operator+=(const LossBreakdown& o);
};

// A tokenized instance with its supervision.
struct PreparedInstance {
  InstanceSet set = InstanceSet::kAnswerPositive;
  EncodedInput enc;
  AnswerTarget target;
};

// Drops (and counts) instances whose span does not survive tokenization.
std::vector<PreparedInstance> PrepareInstances(
    const std::vector<TrainingInstance>& instances, const Vocabulary& vocab,
    int budget, int* n_dropped = nullptr);

// Loss of one instance at epoch t; adds the parameter gradient into *grad
// when non-null.
LossBreakdown InstanceLoss(const QaModel& model, const PreparedInstance& inst,
                           int epoch, const TrainConfig& cfg,
                           std::vector<double>* grad);

// Batch loss and summed gradient. The parallel form gives every instance
// its own buffer and reduces them in batch order, so its result does not
// depend on the thread count; the serial form is the reference.
LossBreakdown TotalLoss(const QaModel& model,
                        std::span<const PreparedInstance* const> batch,
                        int epoch, const TrainConfig& cfg,
                        std::vector<double>* grad);
LossBreakdown TotalLossSerial(const QaModel& model,
                              std::span<const PreparedInstance* const> batch,
                              int epoch, const TrainConfig& cfg,
                              std::vector<double>* grad);

// Rescales grad to at most max_norm in L2; returns the norm before.
double ClipGradient(std::vector<double>* grad, double max_norm);

class Adam {
 public:
  Adam(size_t n, double lr, double beta1, double beta2, double eps);
  void Step(std::vector<double>* params, const std::vector<double>& grad);
  long steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<double> m_, v_;
};

// The set recipe of cfg.regime for each example, in corpus order.
std::vector<TrainingInstance> BuildRegimeInstances(
    const std::vector<MultiHopExample>& examples, const TrainConfig& cfg,
    SetGenStats* stats = nullptr);

struct EpochLog {
  int epoch = 0;
  LossBreakdown loss;
  double dev_answer_loss = 0.0;  // mean L_A over dev A+
  double seconds = 0.0;
};

struct TrainResult {
  explicit TrainResult(QaModel m) : model(std::move(m)) {}

  QaModel model;
  std::vector<EpochLog> epochs;
  double initial_dev_answer_loss = 0.0;
  std::vector<EvidenceSet> eplus;
  InterpreterStats interpreter_stats;
  int n_dropped = 0;
  int n_eplus_instances = 0;
};

// Writes <run_dir>/train_log.csv, checkpoints/epoch_<t>.ckpt, model.ckpt
// and eplus.jsonl (when extracted). An empty run_dir writes nothing.
TrainResult RunCurriculum(const std::vector<MultiHopExample>& train,
                          const std::vector<MultiHopExample>& dev,
                          const Vocabulary& vocab, const TrainConfig& cfg,
                          const std::string& run_dir,
                          const std::function<void(const EpochLog&)>& on_epoch =
                              nullptr);

// Mean L_A over the A+ instances of `examples`.
double DevAnswerLoss(const QaModel& model, const Vocabulary& vocab,
                     const std::vector<MultiHopExample>& examples, int budget);

}  // namespace pseudoev

#endif  // PSEUDOEV_TRAINER_H_
