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

// Run configuration: one flat key = value namespace shared by all commands.
// Files hold one assignment per line; '#' starts a comment.

#ifndef PSEUDOEV_CONFIG_H_
#define PSEUDOEV_CONFIG_H_

#include <string>
#include <vector>

#include "pseudoev/inference.h"
#include "pseudoev/selector.h"
#include "pseudoev/synthetic.h"
#include "pseudoev/trainer.h"

namespace pseudoev {

struct RunConfig {
  uint64_t seed = 42;
  int n_train = 1500;
  int n_dev = 200;
  SyntheticConfig synthetic;
  TrainConfig train;
  SelectorConfig selector;
  PredictOptions predict;
  int threads = 0;  // 0: OpenMP default

  std::string data_dir = "data";
  std::string input_json;
  std::string train_corpus;  // default <data_dir>/train.jsonl
  std::string dev_corpus;    // default <data_dir>/dev.jsonl
  std::string out;           // default runs/<command>
  std::string model_path;
  std::string selector_path;
  std::string eplus_path;
  std::string challenge_path;

  std::string TrainCorpus() const;
  std::string DevCorpus() const;
};

// All valid keys, in echo order.
std::vector<std::string> ConfigKeys();

// Applies one assignment. Throws UsageError on an unknown key (listing the
// valid ones) or a malformed value.
void SetConfigValue(RunConfig* cfg, std::string key, const std::string& value);

// Parses "key = value" lines.
void ApplyConfigText(RunConfig* cfg, const std::string& text,
                     const std::string& source);

// Defaults, then the file (if non-empty), then the overrides in order.
RunConfig LoadConfig(const std::string& path,
                     const std::vector<std::string>& overrides);

// Every key with its effective value, one "key = value" line each.
std::string EchoConfig(const RunConfig& cfg);

}  // namespace pseudoev

#endif  // PSEUDOEV_CONFIG_H_
