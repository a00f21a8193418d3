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

#include "pseudoev/selector.h"

#include <cmath>
#include <map>
#include <random>

#include "pseudoev/checkpoint.h"
#include "pseudoev/losses.h"
#include "pseudoev/trainer.h"

namespace pseudoev {

namespace {

double Sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                  : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

SelectorModel::SelectorModel(const EncoderConfig& config, uint64_t seed)
    : encoder_(config, "encoder", &layout_) {
  w_ = layout_.slot(layout_.Add("f_evi.w", 1, config.hidden_dim));
  b_ = layout_.slot(layout_.Add("f_evi.b", 1, 1));
  params_.assign(layout_.total(), 0.0);
  NormalSampler normal(seed);
  encoder_.Init(&params_, &normal);
  auto w = View(params_, w_);
  for (int j = 0; j < w.cols(); ++j) w(0, j) = 0.02 * normal.Next();
}

std::vector<std::optional<double>> SelectorModel::Score(
    std::string_view question, const Passage& passage, const Vocabulary& vocab,
    int budget) const {
  EncodedInput enc = Tokenize(question, passage, vocab, budget, true);
  Encoder::Cache cache;
  encoder_.Forward(enc.ids, params_, &cache);
  auto w = View(params_, w_);
  const double b = View(params_, b_)(0, 0);
  std::vector<std::optional<double>> out(passage.size());
  for (int k = 0; k < passage.size(); ++k) {
    int m = enc.marker_positions[k];
    if (m < 0) continue;
    out[k] = Sigmoid(cache.h.row(m).dot(w.row(0)) + b);
  }
  return out;
}

double SelectorModel::Loss(const EncodedInput& enc,
                           const std::vector<int>& labels,
                           std::vector<double>* grad) const {
  Encoder::Cache cache;
  encoder_.Forward(enc.ids, params_, &cache);
  auto w = View(params_, w_);
  const double b = View(params_, b_)(0, 0);
  Matrix dh = Matrix::Zero(cache.h.rows(), cache.h.cols());
  double loss = 0.0;
  bool any = false;
  for (size_t k = 0; k < labels.size(); ++k) {
    int m = enc.marker_positions[k];
    if (m < 0 || (labels[k] != 0 && labels[k] != 1)) continue;
    double p = Sigmoid(cache.h.row(m).dot(w.row(0)) + b);
    loss -= labels[k] ? ClampedLog(p, nullptr) : ClampedLog(1.0 - p, nullptr);
    if (grad) {
      double dz = p - labels[k];
      View(*grad, w_).row(0) += dz * cache.h.row(m);
      View(*grad, b_)(0, 0) += dz;
      dh.row(m) += dz * w.row(0);
      any = true;
    }
  }
  if (any) encoder_.Backward(dh, cache, params_, grad);
  return loss;
}

void SelectorModel::Save(const std::string& path,
                         const Vocabulary& vocab) const {
  CheckpointData data;
  data.kind = "selector";
  data.encoder = config();
  data.vocab = vocab.tokens();
  data.slots = layout_.slots();
  data.values = params_;
  WriteCheckpoint(path, data);
}

std::pair<SelectorModel, Vocabulary> SelectorModel::Load(
    const std::string& path) {
  CheckpointData data = ReadCheckpoint(path);
  if (data.kind != "selector") {
    throw DataError(path + ": expected a selector checkpoint, found " +
                    data.kind);
  }
  SelectorModel model(data.encoder, 0);
  CheckLayout(data, model.layout_);
  model.params_ = std::move(data.values);
  return {std::move(model), Vocabulary::FromTokens(data.vocab)};
}

SelectorModel TrainSelector(const std::vector<TrainingInstance>& answer_positive,
                            const std::vector<EvidenceSet>& eplus,
                            const Vocabulary& vocab, const SelectorConfig& cfg,
                            SelectorStats* stats) {
  SelectorStats local;
  SelectorStats& st = stats ? *stats : local;
  EncoderConfig enc_cfg = cfg.encoder;
  enc_cfg.vocab_size = vocab.size();
  enc_cfg.max_len = cfg.token_budget;
  enc_cfg.Validate();
  SelectorModel model(enc_cfg, cfg.seed);

  std::map<std::string, const EvidenceSet*> by_qid;
  for (const auto& e : eplus) by_qid[e.qid] = &e;

  struct Example {
    EncodedInput enc;
    std::vector<int> labels;
  };
  std::vector<Example> data;
  for (const auto& inst : answer_positive) {
    auto it = by_qid.find(inst.qid);
    if (it == by_qid.end()) {
      ++st.n_unmatched;
      continue;
    }
    SentenceSet members(it->second->members.begin(),
                        it->second->members.end());
    Example ex;
    ex.enc = Tokenize(inst.question, inst.passage, vocab, cfg.token_budget,
                      true);
    for (int k = 0; k < inst.passage.size(); ++k) {
      int y = members.count(inst.passage.units[k]) ? 1 : 0;
      if (ex.enc.marker_positions[k] < 0) {
        ++st.n_truncated;
        y = -1;
      } else {
        ++(y ? st.n_positive : st.n_negative);
      }
      ex.labels.push_back(y);
    }
    ++st.n_passages;
    data.push_back(std::move(ex));
  }

  Adam adam(model.layout().total(), cfg.lr, 0.9, 0.999, 1e-8);
  const size_t dim = model.layout().total();
  std::vector<double> grad(dim);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<int> order(data.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::mt19937_64 rng(cfg.seed * 1000003ull + 7919ull * epoch);
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    double total = 0.0;
    for (size_t b = 0; b < order.size(); b += cfg.batch_size) {
      const int n = static_cast<int>(
          std::min(order.size(), b + cfg.batch_size) - b);
      std::vector<std::vector<double>> bufs(n, std::vector<double>(dim));
      std::vector<double> losses(n);
#pragma omp parallel for schedule(dynamic)
      for (int i = 0; i < n; ++i) {
        const Example& ex = data[order[b + i]];
        losses[i] = model.Loss(ex.enc, ex.labels, &bufs[i]);
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      for (int i = 0; i < n; ++i) {
        total += losses[i];
        for (size_t k = 0; k < dim; ++k) grad[k] += bufs[i][k];
      }
      ClipGradient(&grad, cfg.clip_norm);
      adam.Step(&model.params(), grad);
    }
    st.epoch_loss.push_back(total);
  }
  return model;
}

}  // namespace pseudoev
