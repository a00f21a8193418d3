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

// Flat parameter storage. Every model keeps its parameters in one
// contiguous vector described by a ParamLayout; gradients and optimizer
// moments use the same layout.

#ifndef PSEUDOEV_PARAMS_H_
#define PSEUDOEV_PARAMS_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pseudoev {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using MatrixMap = Eigen::Map<Matrix>;
using ConstMatrixMap = Eigen::Map<const Matrix>;

struct ParamSlot {
  std::string name;
  size_t offset = 0;
  int rows = 0;
  int cols = 0;
  size_t size() const { return static_cast<size_t>(rows) * cols; }
};

class ParamLayout {
 public:
  int Add(std::string name, int rows, int cols);
  const ParamSlot& slot(int i) const { return slots_.at(i); }
  const std::vector<ParamSlot>& slots() const { return slots_; }
  int Find(std::string_view name) const;
  size_t total() const { return total_; }
  // Flat [begin, end) ranges of all slots whose name starts with `prefix`.
  std::vector<std::pair<size_t, size_t>> Ranges(std::string_view prefix) const;

  bool operator==(const ParamLayout& other) const;

 private:
  std::vector<ParamSlot> slots_;
  size_t total_ = 0;
};

inline MatrixMap View(std::vector<double>& data, const ParamSlot& s) {
  return MatrixMap(data.data() + s.offset, s.rows, s.cols);
}
inline ConstMatrixMap View(const std::vector<double>& data,
                           const ParamSlot& s) {
  return ConstMatrixMap(data.data() + s.offset, s.rows, s.cols);
}

// Box-Muller over mt19937_64 bits; identical on every standard library.
class NormalSampler {
 public:
  explicit NormalSampler(uint64_t seed) : rng_(seed) {}
  double Next();

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pseudoev

#endif  // PSEUDOEV_PARAMS_H_
