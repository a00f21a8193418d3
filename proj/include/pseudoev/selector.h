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

// Evidence sentence selector: its own encoder over
//   [CLS] question [SEP] s_1 [S] s_2 [S] ... [EOS]
// and a sigmoid unit f_evi read at every [S] marker.

#ifndef PSEUDOEV_SELECTOR_H_
#define PSEUDOEV_SELECTOR_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudoev/encoder.h"
#include "pseudoev/interpreter.h"
#include "pseudoev/params.h"
#include "pseudoev/setgen.h"
#include "pseudoev/tokenizer.h"

namespace pseudoev {

class SelectorModel {
 public:
  SelectorModel(const EncoderConfig& config, uint64_t seed);

  // One probability per passage unit; nullopt for units cut by the budget.
  std::vector<std::optional<double>> Score(std::string_view question,
                                           const Passage& passage,
                                           const Vocabulary& vocab,
                                           int budget) const;

  // Summed binary cross entropy over units with label 0 or 1 (others are
  // ignored); adds the parameter gradient into *grad when non-null.
  double Loss(const EncodedInput& enc, const std::vector<int>& labels,
              std::vector<double>* grad) const;

  const EncoderConfig& config() const { return encoder_.config(); }
  const ParamLayout& layout() const { return layout_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  void Save(const std::string& path, const Vocabulary& vocab) const;
  static std::pair<SelectorModel, Vocabulary> Load(const std::string& path);

 private:
  ParamLayout layout_;
  Encoder encoder_;
  ParamSlot w_, b_;
  std::vector<double> params_;
};

struct SelectorConfig {
  int epochs = 3;
  double lr = 1e-3;
  int batch_size = 8;
  double clip_norm = 1.0;
  int token_budget = 128;
  uint64_t seed = 42;
  EncoderConfig encoder;  // vocab_size and max_len are filled in
};

struct SelectorStats {
  int n_passages = 0;
  int n_positive = 0;
  int n_negative = 0;
  int n_truncated = 0;  // sentences beyond the budget
  int n_unmatched = 0;  // A+ instances without an E+ set
  std::vector<double> epoch_loss;
};

// Positives are E+ members; every other sentence of the same A+ passage is
// negative.
SelectorModel TrainSelector(const std::vector<TrainingInstance>& answer_positive,
                            const std::vector<EvidenceSet>& eplus,
                            const Vocabulary& vocab, const SelectorConfig& cfg,
                            SelectorStats* stats = nullptr);

}  // namespace pseudoev

#endif  // PSEUDOEV_SELECTOR_H_
