// Copyright 2026 The survdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SURVDP_ISOTONIC_H_
#define SURVDP_ISOTONIC_H_

#include <Eigen/Core>
#include <vector>

namespace survdp {

// L2 projection onto the cone {v : v_0 >= v_1 >= ...} by pool adjacent
// violators. Linear time.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
isotonic_nonincreasing(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  struct Block {
    Scalar sum;
    Eigen::Index count;
    Scalar mean() const { return sum / Scalar(count); }
  };
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    blocks.push_back({v[i], 1});
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].mean() < blocks.back().mean()) {
      const Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().count += top.count;
    }
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(v.size());
  Eigen::Index pos = 0;
  for (const Block& b : blocks) {
    out.segment(pos, b.count).setConstant(b.mean());
    pos += b.count;
  }
  return out;
}

// Nonincreasing projection clamped into [0, 1]; clamping preserves the
// ordering, so the result is the projection onto the bounded cone.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> isotonic_project(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  return isotonic_nonincreasing(v).cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
}

}  // namespace survdp

#endif  // SURVDP_ISOTONIC_H_
