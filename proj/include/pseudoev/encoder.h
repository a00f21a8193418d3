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

// Pre-LayerNorm bidirectional transformer encoder with learned positional
// embeddings and an explicit backward pass.

#ifndef PSEUDOEV_ENCODER_H_
#define PSEUDOEV_ENCODER_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pseudoev/params.h"

namespace pseudoev {

struct EncoderConfig {
  int layers = 2;
  int hidden_dim = 64;
  int heads = 4;
  int ffn_dim = 128;
  int vocab_size = 0;
  int max_len = 128;

  // Throws UsageError.
  void Validate() const;
  nlohmann::json ToJson() const;
  static EncoderConfig FromJson(const nlohmann::json& j);
  bool operator==(const EncoderConfig&) const = default;
};

class Encoder {
 public:
  struct LayerCache {
    Matrix x_in, xhat1, a, qkv, attn_out, x_mid, xhat2, b, u, v;
    Vector rstd1, rstd2;
    std::vector<Matrix> probs;  // per head, n x n
  };
  struct Cache {
    std::vector<int> tokens;
    std::vector<char> key_valid;
    std::vector<LayerCache> layers;
    Matrix xhat_f;
    Vector rstd_f;
    Matrix h;  // n x d output
  };

  Encoder() = default;
  // Registers parameter slots named "<prefix>.*" in `layout`.
  Encoder(const EncoderConfig& config, const std::string& prefix,
          ParamLayout* layout);

  void Init(std::vector<double>* params, NormalSampler* normal) const;

  // Keys at [PAD] positions are masked out of attention. Fills cache->h.
  void Forward(std::span<const int> tokens, const std::vector<double>& params,
               Cache* cache) const;
  // Accumulates into *grad.
  void Backward(const Matrix& dh, const Cache& cache,
                const std::vector<double>& params,
                std::vector<double>* grad) const;

  const EncoderConfig& config() const { return config_; }

 private:
  struct LayerSlots {
    ParamSlot ln1_g, ln1_b, w_qkv, b_qkv, w_o, b_o, ln2_g, ln2_b, w_ff1,
        b_ff1, w_ff2, b_ff2;
  };

  EncoderConfig config_;
  ParamSlot tok_emb_, pos_emb_, lnf_g_, lnf_b_;
  std::vector<LayerSlots> layer_slots_;
};

}  // namespace pseudoev

#endif  // PSEUDOEV_ENCODER_H_
