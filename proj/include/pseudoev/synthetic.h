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

// Deterministic bridge-entity corpus in distractor layout.
//
// Each example chains `chain_length` facts, e.g.
//   "Bakoti was born in Dumela ."  /  "Dumela is located in Firano ."
// for the question "Where is the birthplace of Bakoti located ?" with answer
// "Firano". The chain is split across exactly two positive paragraphs; the
// remaining sentences and all distractor paragraphs come from filler
// templates about other entities, so distractors never mention a chain
// entity.

#ifndef PSEUDOEV_SYNTHETIC_H_
#define PSEUDOEV_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pseudoev/types.h"

namespace pseudoev {

struct SyntheticConfig {
  int n_examples = 100;
  int chain_length = 2;
  int n_distractor_paragraphs = 8;
  int sentences_per_paragraph = 4;
  uint64_t seed = 42;
  std::string qid_prefix = "syn";
};

// Throws UsageError on an invalid config or when the chain does not fit
// into the two positive paragraphs.
std::vector<MultiHopExample> GenerateSynthetic(const SyntheticConfig& config);

// Entity names used by the generator, persons first. Fixed-length
// capitalized names, so no name is a substring of another token.
const std::vector<std::string>& SyntheticPersonNames();
const std::vector<std::string>& SyntheticPlaceNames();

}  // namespace pseudoev

#endif  // PSEUDOEV_SYNTHETIC_H_
