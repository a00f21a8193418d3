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

#include "pseudoev/params.h"

#include <cmath>
#include <stdexcept>

namespace pseudoev {

int ParamLayout::Add(std::string name, int rows, int cols) {
  if (Find(name) >= 0) throw std::logic_error("duplicate parameter " + name);
  ParamSlot s{std::move(name), total_, rows, cols};
  total_ += s.size();
  slots_.push_back(std::move(s));
  return static_cast<int>(slots_.size()) - 1;
}

int ParamLayout::Find(std::string_view name) const {
  for (size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::pair<size_t, size_t>> ParamLayout::Ranges(
    std::string_view prefix) const {
  std::vector<std::pair<size_t, size_t>> out;
  for (const auto& s : slots_) {
    if (std::string_view(s.name).substr(0, prefix.size()) == prefix) {
      out.push_back({s.offset, s.offset + s.size()});
    }
  }
  return out;
}

bool ParamLayout::operator==(const ParamLayout& other) const {
  if (slots_.size() != other.slots_.size() || total_ != other.total_) {
    return false;
  }
  for (size_t i = 0; i < slots_.size(); ++i) {
    const auto& a = slots_[i];
    const auto& b = other.slots_[i];
    if (a.name != b.name || a.offset != b.offset || a.rows != b.rows ||
        a.cols != b.cols) {
      return false;
    }
  }
  return true;
}

double NormalSampler::Next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  auto uniform = [&] {
    // (0, 1]: avoids log(0).
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  };
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace pseudoev
