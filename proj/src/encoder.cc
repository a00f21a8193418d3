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

#include "pseudoev/encoder.h"

#include <cmath>
#include <limits>

#include "pseudoev/tokenizer.h"
#include "pseudoev/types.h"

namespace pseudoev {

namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kInitStd = 0.02;
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;

Matrix LayerNormForward(const Matrix& x, const ConstMatrixMap& gamma,
                        const ConstMatrixMap& beta, Matrix* xhat,
                        Vector* rstd) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  xhat->resize(n, d);
  rstd->resize(n);
  for (int i = 0; i < n; ++i) {
    double mean = x.row(i).mean();
    double var = (x.row(i).array() - mean).square().mean();
    double r = 1.0 / std::sqrt(var + kLayerNormEps);
    (*rstd)(i) = r;
    xhat->row(i) = (x.row(i).array() - mean) * r;
  }
  Matrix y = xhat->array().rowwise() * gamma.row(0).array();
  y.array().rowwise() += beta.row(0).array();
  return y;
}

// Returns dx; accumulates parameter gradients.
Matrix LayerNormBackward(const Matrix& dy, const Matrix& xhat,
                         const Vector& rstd, const ConstMatrixMap& gamma,
                         MatrixMap dgamma, MatrixMap dbeta) {
  dgamma.row(0) += (dy.array() * xhat.array()).colwise().sum().matrix();
  dbeta.row(0) += dy.colwise().sum();
  Matrix dxhat = dy.array().rowwise() * gamma.row(0).array();
  const int n = static_cast<int>(dy.rows());
  Matrix dx(n, dy.cols());
  for (int i = 0; i < n; ++i) {
    double m1 = dxhat.row(i).mean();
    double m2 = (dxhat.row(i).array() * xhat.row(i).array()).mean();
    dx.row(i) = rstd(i) *
                (dxhat.row(i).array() - m1 - xhat.row(i).array() * m2).matrix();
  }
  return dx;
}

double Gelu(double x) {
  return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x)));
}

double GeluGrad(double x) {
  double t = std::tanh(kGeluC * (x + kGeluA * x * x * x));
  return 0.5 * (1.0 + t) +
         0.5 * x * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluA * x * x);
}

}  // namespace

void EncoderConfig::Validate() const {
  if (layers < 1) throw UsageError("encoder layers must be >= 1");
  if (hidden_dim < 1 || heads < 1 || hidden_dim % heads != 0) {
    throw UsageError("hidden_dim must be a positive multiple of heads");
  }
  if (ffn_dim < 1) throw UsageError("ffn_dim must be >= 1");
  if (vocab_size <= Vocabulary::kNumSpecial) {
    throw UsageError("vocab_size must exceed the special tokens");
  }
  if (max_len < 4) throw UsageError("max_len must be >= 4");
}

nlohmann::json EncoderConfig::ToJson() const {
  return {{"layers", layers},       {"hidden_dim", hidden_dim},
          {"heads", heads},         {"ffn_dim", ffn_dim},
          {"vocab_size", vocab_size}, {"max_len", max_len}};
}

EncoderConfig EncoderConfig::FromJson(const nlohmann::json& j) {
  EncoderConfig c;
  c.layers = j.at("layers").get<int>();
  c.hidden_dim = j.at("hidden_dim").get<int>();
  c.heads = j.at("heads").get<int>();
  c.ffn_dim = j.at("ffn_dim").get<int>();
  c.vocab_size = j.at("vocab_size").get<int>();
  c.max_len = j.at("max_len").get<int>();
  return c;
}

Encoder::Encoder(const EncoderConfig& config, const std::string& prefix,
                 ParamLayout* layout)
    : config_(config) {
  config.Validate();
  const int d = config.hidden_dim;
  const int f = config.ffn_dim;
  auto add = [&](const std::string& name, int rows, int cols) {
    return layout->slot(layout->Add(prefix + "." + name, rows, cols));
  };
  tok_emb_ = add("tok_emb", config.vocab_size, d);
  pos_emb_ = add("pos_emb", config.max_len, d);
  for (int l = 0; l < config.layers; ++l) {
    std::string p = "layer" + std::to_string(l) + ".";
    LayerSlots s{add(p + "ln1_g", 1, d),     add(p + "ln1_b", 1, d),
                 add(p + "w_qkv", d, 3 * d), add(p + "b_qkv", 1, 3 * d),
                 add(p + "w_o", d, d),       add(p + "b_o", 1, d),
                 add(p + "ln2_g", 1, d),     add(p + "ln2_b", 1, d),
                 add(p + "w_ff1", d, f),     add(p + "b_ff1", 1, f),
                 add(p + "w_ff2", f, d),     add(p + "b_ff2", 1, d)};
    layer_slots_.push_back(std::move(s));
  }
  lnf_g_ = add("lnf_g", 1, d);
  lnf_b_ = add("lnf_b", 1, d);
}

void Encoder::Init(std::vector<double>* params, NormalSampler* normal) const {
  auto gaussian = [&](const ParamSlot& s) {
    auto m = View(*params, s);
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) m(i, j) = kInitStd * normal->Next();
    }
  };
  auto constant = [&](const ParamSlot& s, double v) {
    View(*params, s).setConstant(v);
  };
  gaussian(tok_emb_);
  gaussian(pos_emb_);
  for (const auto& s : layer_slots_) {
    constant(s.ln1_g, 1.0);
    constant(s.ln1_b, 0.0);
    gaussian(s.w_qkv);
    constant(s.b_qkv, 0.0);
    gaussian(s.w_o);
    constant(s.b_o, 0.0);
    constant(s.ln2_g, 1.0);
    constant(s.ln2_b, 0.0);
    gaussian(s.w_ff1);
    constant(s.b_ff1, 0.0);
    gaussian(s.w_ff2);
    constant(s.b_ff2, 0.0);
  }
  constant(lnf_g_, 1.0);
  constant(lnf_b_, 0.0);
}

void Encoder::Forward(std::span<const int> tokens,
                      const std::vector<double>& params, Cache* cache) const {
  const int n = static_cast<int>(tokens.size());
  const int d = config_.hidden_dim;
  const int heads = config_.heads;
  const int dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  if (n > config_.max_len) {
    throw DataError("sequence of " + std::to_string(n) +
                    " tokens exceeds max_len " +
                    std::to_string(config_.max_len));
  }
  if (n == 0) throw DataError("empty token sequence");

  cache->tokens.assign(tokens.begin(), tokens.end());
  cache->key_valid.resize(n);
  auto tok = View(params, tok_emb_);
  auto pos = View(params, pos_emb_);
  Matrix x(n, d);
  for (int i = 0; i < n; ++i) {
    int id = tokens[i];
    if (id < 0 || id >= config_.vocab_size) {
      throw DataError("token id " + std::to_string(id) + " out of range");
    }
    cache->key_valid[i] = id != Vocabulary::kPad;
    x.row(i) = tok.row(id) + pos.row(i);
  }

  cache->layers.resize(layer_slots_.size());
  for (size_t l = 0; l < layer_slots_.size(); ++l) {
    const LayerSlots& s = layer_slots_[l];
    LayerCache& c = cache->layers[l];
    c.x_in = x;
    c.a = LayerNormForward(x, View(params, s.ln1_g), View(params, s.ln1_b),
                           &c.xhat1, &c.rstd1);
    c.qkv = c.a * View(params, s.w_qkv);
    c.qkv.rowwise() += View(params, s.b_qkv).row(0);

    c.probs.resize(heads);
    c.attn_out.resize(n, d);
    for (int hd = 0; hd < heads; ++hd) {
      auto q = c.qkv.middleCols(hd * dh, dh);
      auto k = c.qkv.middleCols(d + hd * dh, dh);
      auto v = c.qkv.middleCols(2 * d + hd * dh, dh);
      Matrix scores = (q * k.transpose()) * scale;
      Matrix& p = c.probs[hd];
      p.resize(n, n);
      for (int i = 0; i < n; ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
          if (cache->key_valid[j]) mx = std::max(mx, scores(i, j));
        }
        double z = 0.0;
        for (int j = 0; j < n; ++j) {
          double e = cache->key_valid[j] ? std::exp(scores(i, j) - mx) : 0.0;
          p(i, j) = e;
          z += e;
        }
        p.row(i) /= z;
      }
      c.attn_out.middleCols(hd * dh, dh) = p * v;
    }
    x = x + c.attn_out * View(params, s.w_o);
    x.rowwise() += View(params, s.b_o).row(0);
    c.x_mid = x;

    c.b = LayerNormForward(x, View(params, s.ln2_g), View(params, s.ln2_b),
                           &c.xhat2, &c.rstd2);
    c.u = c.b * View(params, s.w_ff1);
    c.u.rowwise() += View(params, s.b_ff1).row(0);
    c.v = c.u.unaryExpr(&Gelu);
    x = x + c.v * View(params, s.w_ff2);
    x.rowwise() += View(params, s.b_ff2).row(0);
  }
  cache->h = LayerNormForward(x, View(params, lnf_g_), View(params, lnf_b_),
                              &cache->xhat_f, &cache->rstd_f);
}

void Encoder::Backward(const Matrix& dh, const Cache& cache,
                       const std::vector<double>& params,
                       std::vector<double>* grad) const {
  const int n = static_cast<int>(cache.tokens.size());
  const int d = config_.hidden_dim;
  const int heads = config_.heads;
  const int dh_size = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh_size));

  Matrix dx = LayerNormBackward(dh, cache.xhat_f, cache.rstd_f,
                                View(params, lnf_g_), View(*grad, lnf_g_),
                                View(*grad, lnf_b_));

  for (int l = static_cast<int>(layer_slots_.size()) - 1; l >= 0; --l) {
    const LayerSlots& s = layer_slots_[l];
    const LayerCache& c = cache.layers[l];

    // Feed-forward block: x = x_mid + gelu(LN2(x_mid) W1 + b1) W2 + b2.
    View(*grad, s.w_ff2) += c.v.transpose() * dx;
    View(*grad, s.b_ff2).row(0) += dx.colwise().sum();
    Matrix dv = dx * View(params, s.w_ff2).transpose();
    Matrix du = dv.array() * c.u.unaryExpr(&GeluGrad).array();
    View(*grad, s.w_ff1) += c.b.transpose() * du;
    View(*grad, s.b_ff1).row(0) += du.colwise().sum();
    Matrix db = du * View(params, s.w_ff1).transpose();
    dx += LayerNormBackward(db, c.xhat2, c.rstd2, View(params, s.ln2_g),
                            View(*grad, s.ln2_g), View(*grad, s.ln2_b));

    // Attention block: x_mid = x_in + attn(LN1(x_in)) Wo + bo.
    View(*grad, s.w_o) += c.attn_out.transpose() * dx;
    View(*grad, s.b_o).row(0) += dx.colwise().sum();
    Matrix dattn = dx * View(params, s.w_o).transpose();
    Matrix dqkv = Matrix::Zero(n, 3 * d);
    for (int hd = 0; hd < heads; ++hd) {
      auto q = c.qkv.middleCols(hd * dh_size, dh_size);
      auto k = c.qkv.middleCols(d + hd * dh_size, dh_size);
      auto v = c.qkv.middleCols(2 * d + hd * dh_size, dh_size);
      const Matrix& p = c.probs[hd];
      Matrix dout = dattn.middleCols(hd * dh_size, dh_size);
      dqkv.middleCols(2 * d + hd * dh_size, dh_size) = p.transpose() * dout;
      Matrix dp = dout * v.transpose();
      Matrix ds(n, n);
      for (int i = 0; i < n; ++i) {
        double dot = p.row(i).dot(dp.row(i));
        ds.row(i) = p.row(i).array() * (dp.row(i).array() - dot);
      }
      ds *= scale;
      dqkv.middleCols(hd * dh_size, dh_size) = ds * k;
      dqkv.middleCols(d + hd * dh_size, dh_size) = ds.transpose() * q;
    }
    View(*grad, s.w_qkv) += c.a.transpose() * dqkv;
    View(*grad, s.b_qkv).row(0) += dqkv.colwise().sum();
    Matrix da = dqkv * View(params, s.w_qkv).transpose();
    dx += LayerNormBackward(da, c.xhat1, c.rstd1, View(params, s.ln1_g),
                            View(*grad, s.ln1_g), View(*grad, s.ln1_b));
  }

  auto dtok = View(*grad, tok_emb_);
  auto dpos = View(*grad, pos_emb_);
  for (int i = 0; i < n; ++i) {
    dtok.row(cache.tokens[i]) += dx.row(i);
    dpos.row(i) += dx.row(i);
  }
}

}  // namespace pseudoev
