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

// Checkpoint container:
//
//   "PSEVCKPT"              8-byte magic
//   uint32 version          currently 1
//   uint64 header_bytes     followed by a UTF-8 JSON header
//   uint64 n_values         followed by n_values little-endian float64
//
// The header holds the model kind, encoder config, vocabulary, free-form
// metadata and the parameter table {name, rows, cols, offset}.

#ifndef PSEUDOEV_CHECKPOINT_H_
#define PSEUDOEV_CHECKPOINT_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "pseudoev/encoder.h"
#include "pseudoev/params.h"

namespace pseudoev {

inline constexpr uint32_t kCheckpointVersion = 1;

struct CheckpointData {
  std::string kind;  // "qa" or "selector"
  EncoderConfig encoder;
  std::vector<std::string> vocab;
  nlohmann::json meta = nlohmann::json::object();
  std::vector<ParamSlot> slots;
  std::vector<double> values;
};

void WriteCheckpoint(const std::string& path, const CheckpointData& data);
// Throws DataError on a missing file, bad magic or version, or a table that
// does not match the payload.
CheckpointData ReadCheckpoint(const std::string& path);

// Throws DataError unless `data` carries exactly `layout`.
void CheckLayout(const CheckpointData& data, const ParamLayout& layout);

}  // namespace pseudoev

#endif  // PSEUDOEV_CHECKPOINT_H_
