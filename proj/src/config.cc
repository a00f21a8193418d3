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

#include "pseudoev/config.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "fmt/format.h"

namespace pseudoev {

namespace {

struct Key {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
T ParseNumber(const std::string& key, const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw UsageError("bad value for " + key + ": '" + v + "'");
  }
  return out;
}

double ParseReal(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw UsageError("bad value for " + key + ": '" + v + "'");
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError("bad value for " + key + ": '" + v + "' (true/false)");
}

std::string Real(double d) { return fmt::format("{}", d); }
std::string Bool(bool b) { return b ? "true" : "false"; }

#define INT_KEY(NAME, FIELD)                                               \
  Key {                                                                    \
    NAME, [](RunConfig& c, const std::string& v) {                         \
      c.FIELD = ParseNumber<int>(NAME, v);                                 \
    },                                                                     \
        [](const RunConfig& c) { return std::to_string(c.FIELD); }         \
  }
#define REAL_KEY(NAME, FIELD)                                              \
  Key {                                                                    \
    NAME, [](RunConfig& c, const std::string& v) {                         \
      c.FIELD = ParseReal(NAME, v);                                        \
    },                                                                     \
        [](const RunConfig& c) { return Real(c.FIELD); }                   \
  }
#define BOOL_KEY(NAME, FIELD)                                              \
  Key {                                                                    \
    NAME, [](RunConfig& c, const std::string& v) {                         \
      c.FIELD = ParseBool(NAME, v);                                        \
    },                                                                     \
        [](const RunConfig& c) { return Bool(c.FIELD); }                   \
  }
#define STR_KEY(NAME, FIELD)                                               \
  Key {                                                                    \
    NAME, [](RunConfig& c, const std::string& v) { c.FIELD = v; },         \
        [](const RunConfig& c) { return c.FIELD; }                         \
  }

const std::vector<Key>& Keys() {
  static const std::vector<Key> keys = {
      Key{"seed",
          [](RunConfig& c, const std::string& v) {
            c.seed = ParseNumber<uint64_t>("seed", v);
          },
          [](const RunConfig& c) { return std::to_string(c.seed); }},
      INT_KEY("n_train", n_train),
      INT_KEY("n_dev", n_dev),
      INT_KEY("chain_length", synthetic.chain_length),
      INT_KEY("n_distractors", synthetic.n_distractor_paragraphs),
      INT_KEY("sentences_per_paragraph", synthetic.sentences_per_paragraph),
      INT_KEY("k_neg", train.k_neg),
      REAL_KEY("lr", train.lr),
      INT_KEY("batch_size", train.batch_size),
      INT_KEY("epochs", train.epochs_total),
      INT_KEY("K", train.K),
      REAL_KEY("lambda", train.lambda),
      Key{"regularizer",
          [](RunConfig& c, const std::string& v) {
            c.train.regularizer = ParseRegularizer(v);
          },
          [](const RunConfig& c) {
            return std::string(ToString(c.train.regularizer));
          }},
      Key{"regime",
          [](RunConfig& c, const std::string& v) {
            c.train.regime = ParseRegime(v);
          },
          [](const RunConfig& c) {
            return std::string(ToString(c.train.regime));
          }},
      BOOL_KEY("use_eplus", train.use_eplus),
      BOOL_KEY("biased_to_encoder", train.biased_to_encoder),
      REAL_KEY("clip_norm", train.clip_norm),
      Key{"strategy",
          [](RunConfig& c, const std::string& v) {
            c.train.interpreter.strategy = ParseStrategy(v);
          },
          [](const RunConfig& c) {
            return std::string(ToString(c.train.interpreter.strategy));
          }},
      INT_KEY("T", train.interpreter.T),
      INT_KEY("top_k", predict.top_k),
      Key{"mode",
          [](RunConfig& c, const std::string& v) {
            c.predict.mode = ParseInferenceMode(v);
          },
          [](const RunConfig& c) {
            return std::string(ToString(c.predict.mode));
          }},
      INT_KEY("max_span_len", predict.max_span_len),
      INT_KEY("token_budget", train.token_budget),
      INT_KEY("layers", train.encoder.layers),
      INT_KEY("hidden_dim", train.encoder.hidden_dim),
      INT_KEY("heads", train.encoder.heads),
      INT_KEY("ffn_dim", train.encoder.ffn_dim),
      INT_KEY("selector_epochs", selector.epochs),
      REAL_KEY("selector_lr", selector.lr),
      INT_KEY("threads", threads),
      STR_KEY("data_dir", data_dir),
      STR_KEY("input_json", input_json),
      STR_KEY("train_corpus", train_corpus),
      STR_KEY("dev_corpus", dev_corpus),
      STR_KEY("out", out),
      STR_KEY("model", model_path),
      STR_KEY("selector", selector_path),
      STR_KEY("eplus", eplus_path),
      STR_KEY("challenge", challenge_path),
  };
  return keys;
}

#undef INT_KEY
#undef REAL_KEY
#undef BOOL_KEY
#undef STR_KEY

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shared settings that several components read.
void Propagate(RunConfig* c) {
  c->train.seed = c->seed;
  c->selector.seed = c->seed;
  c->synthetic.seed = c->seed;
  c->selector.token_budget = c->train.token_budget;
  c->selector.encoder = c->train.encoder;
  c->selector.batch_size = c->train.batch_size;
  c->selector.clip_norm = c->train.clip_norm;
  c->predict.token_budget = c->train.token_budget;
}

}  // namespace

std::string RunConfig::TrainCorpus() const {
  if (!train_corpus.empty()) return train_corpus;
  return (std::filesystem::path(data_dir) / "train.jsonl").string();
}

std::string RunConfig::DevCorpus() const {
  if (!dev_corpus.empty()) return dev_corpus;
  return (std::filesystem::path(data_dir) / "dev.jsonl").string();
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> out;
  for (const auto& k : Keys()) out.push_back(k.name);
  return out;
}

void SetConfigValue(RunConfig* cfg, std::string key, const std::string& value) {
  std::replace(key.begin(), key.end(), '-', '_');
  for (const auto& k : Keys()) {
    if (key == k.name) {
      k.set(*cfg, value);
      Propagate(cfg);
      return;
    }
  }
  std::string valid;
  for (const auto& k : Keys()) {
    if (!valid.empty()) valid += ", ";
    valid += k.name;
  }
  throw UsageError("unknown config key '" + key + "'; valid keys: " + valid);
}

void ApplyConfigText(RunConfig* cfg, const std::string& text,
                     const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = Trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(fmt::format("{}:{}: expected key = value", source,
                                   lineno));
    }
    SetConfigValue(cfg, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
}

RunConfig LoadConfig(const std::string& path,
                     const std::vector<std::string>& overrides) {
  RunConfig cfg;
  Propagate(&cfg);
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    ApplyConfigText(&cfg, ss.str(), path);
  }
  for (const auto& o : overrides) {
    size_t eq = o.find('=');
    if (eq == std::string::npos) {
      throw UsageError("override '" + o + "' is not key=value");
    }
    SetConfigValue(&cfg, Trim(o.substr(0, eq)), Trim(o.substr(eq + 1)));
  }
  return cfg;
}

std::string EchoConfig(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : Keys()) {
    out += fmt::format("{} = {}\n", k.name, k.get(cfg));
  }
  return out;
}

}  // namespace pseudoev
