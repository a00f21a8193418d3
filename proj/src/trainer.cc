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

#include "pseudoev/trainer.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "fmt/format.h"
#include "pseudoev/corpus.h"
#include "pseudoev/losses.h"

namespace pseudoev {

std::string_view ToString(Regularizer r) {
  switch (r) {
    case Regularizer::kNone: return "none";
    case Regularizer::kUniformKl: return "uniform_kl";
    case Regularizer::kBiasDecorrelate: return "bias_decorrelate";
  }
  return "";
}

std::string_view ToString(Regime r) {
  return r == Regime::kPaired ? "paired" : "single_paragraph";
}

Regularizer ParseRegularizer(std::string_view s) {
  for (auto r : {Regularizer::kNone, Regularizer::kUniformKl,
                 Regularizer::kBiasDecorrelate}) {
    if (ToString(r) == s) return r;
  }
  throw UsageError("unknown regularizer '" + std::string(s) +
                   "' (none, uniform_kl, bias_decorrelate)");
}

Regime ParseRegime(std::string_view s) {
  if (s == "paired") return Regime::kPaired;
  if (s == "single_paragraph") return Regime::kSingleParagraph;
  throw UsageError("unknown regime '" + std::string(s) +
                   "' (paired, single_paragraph)");
}

void TrainConfig::Validate() const {
  if (!(lr > 0.0)) throw UsageError("lr must be > 0");
  if (batch_size < 1) throw UsageError("batch_size must be >= 1");
  if (K < 1 || K >= epochs_total) {
    throw UsageError("K must satisfy 1 <= K < epochs");
  }
  if (lambda < 0.0) throw UsageError("lambda must be >= 0");
  if (k_neg < 0) throw UsageError("k_neg must be >= 0");
  if (!(clip_norm > 0.0)) throw UsageError("clip_norm must be > 0");
  interpreter.Validate();
}

LossBreakdown& LossBreakdown::operator+=(const LossBreakdown& o) {
  L_A += o.L_A;
  R += o.R;
  R_hat += o.R_hat;
  L_total += o.L_total;
  n_a_pos += o.n_a_pos;
  n_a_neg += o.n_a_neg;
  n_e_neg += o.n_e_neg;
  n_e_pos += o.n_e_pos;
  n_eplus_excluded += o.n_eplus_excluded;
  n_clamped += o.n_clamped;
  return *this;
}

std::vector<PreparedInstance> PrepareInstances(
    const std::vector<TrainingInstance>& instances, const Vocabulary& vocab,
    int budget, int* n_dropped) {
  std::vector<PreparedInstance> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    PreparedInstance p;
    p.set = inst.set;
    p.enc = Tokenize(inst.question, inst.passage, vocab, budget);
    auto target = MakeTarget(inst, p.enc);
    if (!target) {
      if (n_dropped) ++*n_dropped;
      continue;
    }
    p.target = *target;
    out.push_back(std::move(p));
  }
  return out;
}

LossBreakdown InstanceLoss(const QaModel& model, const PreparedInstance& inst,
                           int epoch, const TrainConfig& cfg,
                           std::vector<double>* grad) {
  LossBreakdown b;
  switch (inst.set) {
    case InstanceSet::kEvidencePositive:
      if (epoch <= cfg.K || !cfg.use_eplus) {
        b.n_eplus_excluded = 1;
        return b;
      }
      b.n_e_pos = 1;
      break;
    case InstanceSet::kEvidenceNegative:
      if (cfg.regularizer == Regularizer::kNone) return b;
      b.n_e_neg = 1;
      break;
    case InstanceSet::kAnswerPositive: b.n_a_pos = 1; break;
    case InstanceSet::kAnswerNegative: b.n_a_neg = 1; break;
  }

  QaModel::Cache cache;
  ModelOutput out = model.Forward(inst.enc.ids, &cache);
  HeadGradients g = HeadGradients::Zero(out.size());
  g.biased_to_encoder = cfg.biased_to_encoder;
  HeadGradients* gp = grad ? &g : nullptr;
  if (inst.set == InstanceSet::kEvidenceNegative) {
    if (cfg.regularizer == Regularizer::kBiasDecorrelate) {
      b.R_hat = BiasDecorrelation(out, inst.target, cfg.lambda, gp,
                                  &b.n_clamped).value;
    } else {
      b.R = UniformKl(out, gp);
    }
  } else {
    b.L_A = AnswerLoss(out, inst.target, gp, &b.n_clamped);
  }
  b.L_total = b.L_A + b.R + b.R_hat;
  if (grad) model.Backward(cache, g, grad);
  return b;
}

LossBreakdown TotalLoss(const QaModel& model,
                        std::span<const PreparedInstance* const> batch,
                        int epoch, const TrainConfig& cfg,
                        std::vector<double>* grad) {
  const int n = static_cast<int>(batch.size());
  const size_t dim = model.layout().total();
  std::vector<LossBreakdown> parts(n);
  std::vector<std::vector<double>> bufs(grad ? n : 0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    std::vector<double>* g = nullptr;
    if (grad) {
      bufs[i].assign(dim, 0.0);
      g = &bufs[i];
    }
    parts[i] = InstanceLoss(model, *batch[i], epoch, cfg, g);
  }
  LossBreakdown total;
  for (int i = 0; i < n; ++i) {
    total += parts[i];
    if (grad) {
      for (size_t k = 0; k < dim; ++k) (*grad)[k] += bufs[i][k];
    }
  }
  return total;
}

LossBreakdown TotalLossSerial(const QaModel& model,
                              std::span<const PreparedInstance* const> batch,
                              int epoch, const TrainConfig& cfg,
                              std::vector<double>* grad) {
  LossBreakdown total;
  std::vector<double> buf;
  for (const PreparedInstance* inst : batch) {
    if (grad) buf.assign(grad->size(), 0.0);
    total += InstanceLoss(model, *inst, epoch, cfg, grad ? &buf : nullptr);
    if (grad) {
      for (size_t k = 0; k < buf.size(); ++k) (*grad)[k] += buf[k];
    }
  }
  return total;
}

double ClipGradient(std::vector<double>* grad, double max_norm) {
  double sq = 0.0;
  for (double g : *grad) sq += g * g;
  double norm = std::sqrt(sq);
  if (norm > max_norm) {
    double scale = max_norm / norm;
    for (double& g : *grad) g *= scale;
  }
  return norm;
}

Adam::Adam(size_t n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n), v_(n) {}

void Adam::Step(std::vector<double>* params, const std::vector<double>& grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < grad.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    (*params)[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

std::vector<TrainingInstance> BuildRegimeInstances(
    const std::vector<MultiHopExample>& examples, const TrainConfig& cfg,
    SetGenStats* stats) {
  if (cfg.regime == Regime::kSingleParagraph) {
    return BuildSingleParagraphInstances(examples, cfg.k_neg, cfg.seed, stats);
  }
  auto all = BuildTrainingSets(examples, cfg.k_neg, cfg.seed, stats);
  if (cfg.regularizer != Regularizer::kNone) return all;
  std::vector<TrainingInstance> kept;
  for (auto& inst : all) {
    if (inst.set != InstanceSet::kEvidenceNegative) {
      kept.push_back(std::move(inst));
    }
  }
  return kept;
}

double DevAnswerLoss(const QaModel& model, const Vocabulary& vocab,
                     const std::vector<MultiHopExample>& examples,
                     int budget) {
  std::vector<TrainingInstance> insts;
  for (const auto& ex : examples) {
    auto sets = BuildAnswerSets(ex, 0, 0);
    for (auto& i : sets.first) insts.push_back(std::move(i));
  }
  auto prepared = PrepareInstances(insts, vocab, budget);
  if (prepared.empty()) return 0.0;
  std::vector<double> losses(prepared.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(prepared.size()); ++i) {
    losses[i] =
        AnswerLoss(model.Forward(prepared[i].enc.ids), prepared[i].target);
  }
  return std::accumulate(losses.begin(), losses.end(), 0.0) /
         static_cast<double>(losses.size());
}

namespace {

std::string LogHeader() {
  return "epoch,L_A,R,R_hat,L_total,n_a_pos,n_a_neg,n_e_neg,n_e_pos,"
         "n_eplus_excluded,n_clamped,dev_L_A,regularizer,seconds\n";
}

std::string LogRow(const EpochLog& e, const TrainConfig& cfg) {
  const auto& l = e.loss;
  return fmt::format("{},{:.10g},{:.10g},{:.10g},{:.10g},{},{},{},{},{},{},"
                     "{:.10g},{},{:.2f}\n",
                     e.epoch, l.L_A, l.R, l.R_hat, l.L_total, l.n_a_pos,
                     l.n_a_neg, l.n_e_neg, l.n_e_pos, l.n_eplus_excluded,
                     l.n_clamped, e.dev_answer_loss, ToString(cfg.regularizer),
                     e.seconds);
}

bool ExtractsEvidence(const TrainConfig& cfg) {
  return cfg.use_eplus && cfg.regularizer != Regularizer::kNone &&
         cfg.regime == Regime::kPaired;
}

}  // namespace

TrainResult RunCurriculum(const std::vector<MultiHopExample>& train,
                          const std::vector<MultiHopExample>& dev,
                          const Vocabulary& vocab, const TrainConfig& cfg,
                          const std::string& run_dir,
                          const std::function<void(const EpochLog&)>& on_epoch) {
  cfg.Validate();
  EncoderConfig enc = cfg.encoder;
  enc.vocab_size = vocab.size();
  enc.max_len = cfg.token_budget;
  enc.Validate();

  TrainResult result(QaModel(enc, cfg.seed));
  QaModel& model = result.model;
  const bool write = !run_dir.empty();
  namespace fs = std::filesystem;
  if (write) fs::create_directories(fs::path(run_dir) / "checkpoints");

  auto instances = BuildRegimeInstances(train, cfg);
  auto prepared =
      PrepareInstances(instances, vocab, cfg.token_budget, &result.n_dropped);
  std::vector<TrainingInstance> answer_positive;
  if (ExtractsEvidence(cfg)) {
    for (const auto& inst : instances) {
      if (inst.set == InstanceSet::kAnswerPositive) {
        answer_positive.push_back(inst);
      }
    }
  }

  Adam adam(model.layout().total(), cfg.lr, cfg.adam_beta1, cfg.adam_beta2,
            cfg.adam_eps);
  std::string log = LogHeader();
  result.initial_dev_answer_loss =
      DevAnswerLoss(model, vocab, dev, cfg.token_budget);

  std::vector<double> grad(model.layout().total());
  for (int epoch = 1; epoch <= cfg.epochs_total; ++epoch) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<const PreparedInstance*> order;
    order.reserve(prepared.size());
    for (const auto& p : prepared) order.push_back(&p);
    std::mt19937_64 rng(cfg.seed * 1000003ull + static_cast<uint64_t>(epoch));
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }

    EpochLog entry;
    entry.epoch = epoch;
    for (size_t b = 0; b < order.size(); b += cfg.batch_size) {
      size_t e = std::min(order.size(), b + cfg.batch_size);
      std::span<const PreparedInstance* const> batch(order.data() + b, e - b);
      std::fill(grad.begin(), grad.end(), 0.0);
      entry.loss += TotalLoss(model, batch, epoch, cfg, &grad);
      ClipGradient(&grad, cfg.clip_norm);
      adam.Step(&model.params(), grad);
    }
    entry.dev_answer_loss = DevAnswerLoss(model, vocab, dev, cfg.token_budget);

    if (epoch == cfg.K && ExtractsEvidence(cfg)) {
      ModelConfidence oracle(model, vocab, cfg.token_budget);
      auto sets = ExtractAll(oracle, answer_positive, cfg.interpreter,
                             &result.interpreter_stats);
      std::vector<TrainingInstance> eplus;
      for (size_t i = 0; i < sets.size(); ++i) {
        if (!sets[i]) continue;
        result.eplus.push_back(*sets[i]);
        if (auto inst = MakeEvidencePositive(answer_positive[i], *sets[i])) {
          eplus.push_back(std::move(*inst));
        }
      }
      auto more = PrepareInstances(eplus, vocab, cfg.token_budget,
                                   &result.n_dropped);
      result.n_eplus_instances = static_cast<int>(more.size());
      for (auto& p : more) prepared.push_back(std::move(p));
      if (write) {
        WriteEvidenceSets((fs::path(run_dir) / "eplus.jsonl").string(),
                          result.eplus);
      }
    }

    entry.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    result.epochs.push_back(entry);
    log += LogRow(entry, cfg);
    if (write) {
      model.Save((fs::path(run_dir) / "checkpoints" /
                  fmt::format("epoch_{}.ckpt", epoch))
                     .string(),
                 vocab);
      WriteTextFile((fs::path(run_dir) / "train_log.csv").string(), log);
    }
    if (on_epoch) on_epoch(entry);
  }
  if (write) model.Save((fs::path(run_dir) / "model.ckpt").string(), vocab);
  return result;
}

}  // namespace pseudoev
