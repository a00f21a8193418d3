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

#include "pseudoev/checkpoint.h"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "pseudoev/types.h"

namespace pseudoev {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is written in host order");

namespace {

constexpr char kMagic[8] = {'P', 'S', 'E', 'V', 'C', 'K', 'P', 'T'};

template <typename T>
void WritePod(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::ifstream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw DataError(path + ": truncated checkpoint");
  }
  return v;
}

}  // namespace

void WriteCheckpoint(const std::string& path, const CheckpointData& data) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& s : data.slots) {
    table.push_back({{"name", s.name},
                     {"rows", s.rows},
                     {"cols", s.cols},
                     {"offset", s.offset}});
  }
  nlohmann::json header = {{"format", "pseudoev-checkpoint"},
                           {"kind", data.kind},
                           {"encoder", data.encoder.ToJson()},
                           {"vocab", data.vocab},
                           {"meta", data.meta},
                           {"params", table}};
  std::string text = header.dump();

  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  WritePod<uint32_t>(out, kCheckpointVersion);
  WritePod<uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  WritePod<uint64_t>(out, data.values.size());
  out.write(reinterpret_cast<const char*>(data.values.data()),
            static_cast<std::streamsize>(data.values.size() * sizeof(double)));
  if (!out) throw DataError("write failed: " + path);
}

CheckpointData ReadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError(path + ": not a checkpoint file");
  }
  uint32_t version = ReadPod<uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw DataError(path + ": unsupported checkpoint version " +
                    std::to_string(version));
  }
  uint64_t header_bytes = ReadPod<uint64_t>(in, path);
  std::string text(header_bytes, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(header_bytes))) {
    throw DataError(path + ": truncated header");
  }
  CheckpointData data;
  try {
    auto header = nlohmann::json::parse(text);
    data.kind = header.at("kind").get<std::string>();
    data.encoder = EncoderConfig::FromJson(header.at("encoder"));
    data.vocab = header.at("vocab").get<std::vector<std::string>>();
    data.meta = header.at("meta");
    for (const auto& s : header.at("params")) {
      data.slots.push_back({s.at("name").get<std::string>(),
                            s.at("offset").get<size_t>(), s.at("rows").get<int>(),
                            s.at("cols").get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": bad header: " + e.what());
  }
  uint64_t n = ReadPod<uint64_t>(in, path);
  data.values.resize(n);
  if (!in.read(reinterpret_cast<char*>(data.values.data()),
               static_cast<std::streamsize>(n * sizeof(double)))) {
    throw DataError(path + ": truncated payload");
  }
  size_t expected = 0;
  for (const auto& s : data.slots) {
    if (s.offset != expected) throw DataError(path + ": non-contiguous table");
    expected += s.size();
  }
  if (expected != n) throw DataError(path + ": table does not match payload");
  return data;
}

void CheckLayout(const CheckpointData& data, const ParamLayout& layout) {
  const auto& slots = layout.slots();
  bool ok = slots.size() == data.slots.size() &&
            layout.total() == data.values.size();
  for (size_t i = 0; ok && i < slots.size(); ++i) {
    ok = slots[i].name == data.slots[i].name &&
         slots[i].rows == data.slots[i].rows &&
         slots[i].cols == data.slots[i].cols &&
         slots[i].offset == data.slots[i].offset;
  }
  if (!ok) throw DataError("checkpoint parameters do not match the model");
}

}  // namespace pseudoev
