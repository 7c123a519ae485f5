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

#ifndef SURVDP_NOISE_H_
#define SURVDP_NOISE_H_

#include <cstdint>
#include <random>

namespace survdp {

std::uint64_t splitmix64(std::uint64_t x);

// Seed of the index-th child stream of `parent`.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(parent ^ index);
}

// Seeded random stream. The same seed yields the same sequence on every
// platform: only the raw mt19937_64 output is used, never the
// implementation-defined std distributions.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform on the open interval (-1/2, 1/2).
  double centered_uniform();

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  std::uint64_t next_u64() { return engine_(); }

  // Number of centered_uniform() calls so far; one per Laplace sample.
  std::uint64_t draws() const { return draws_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

// Laplace(0, scale) by inverse CDF: x = -scale * sign(u) * ln(1 - 2|u|).
// Throws std::invalid_argument unless scale > 0.
double laplace_sample(NoiseSource& rng, double scale);

}  // namespace survdp

#endif  // SURVDP_NOISE_H_
