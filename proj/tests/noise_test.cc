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

#include "survdp/noise.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace survdp {
namespace {

constexpr int kSamples = 1'000'000;

std::vector<double> draw(std::uint64_t seed, double scale, int n) {
  NoiseSource rng(seed);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (double& x : out) x = laplace_sample(rng, scale);
  return out;
}

TEST(SplitMixTest, KnownValues) {
  // First outputs of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(5, 3), splitmix64(5 ^ 3));
}

TEST(NoiseSourceTest, CenteredUniformStaysOpen) {
  NoiseSource rng(42);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.centered_uniform();
    ASSERT_GT(u, -0.5);
    ASSERT_LT(u, 0.5);
  }
  EXPECT_EQ(rng.draws(), 100000u);
}

TEST(NoiseSourceTest, UniformIndexCoversRange) {
  NoiseSource rng(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[rng.uniform_index(7)];
  for (int h : hits) EXPECT_GT(h, 850);
  EXPECT_THROW(rng.uniform_index(0), std::invalid_argument);
}

TEST(LaplaceTest, VarianceMatchesClosedForm) {
  for (double scale : {0.5, 1.0, 3.0}) {
    const std::vector<double> x = draw(17, scale, kSamples);
    double sum = 0, sq = 0;
    for (double v : x) {
      sum += v;
      sq += v * v;
    }
    const double mean = sum / kSamples;
    const double var = sq / kSamples - mean * mean;
    EXPECT_NEAR(var, 2 * scale * scale, 0.02 * 2 * scale * scale) << scale;
    EXPECT_NEAR(mean, 0.0, 0.01 * scale);
  }
}

TEST(LaplaceTest, MedianNearZero) {
  const double scale = 2.0;
  std::vector<double> x = draw(23, scale, kSamples);
  std::nth_element(x.begin(), x.begin() + kSamples / 2, x.end());
  EXPECT_NEAR(x[kSamples / 2], 0.0, 0.01 * scale);
}

TEST(LaplaceTest, TailMatchesCdf) {
  // P(|X| > l ln 10) = 0.1.
  const double scale = 1.5;
  const std::vector<double> x = draw(29, scale, kSamples);
  const auto beyond = std::count_if(x.begin(), x.end(), [&](double v) {
    return std::abs(v) > scale * std::log(10.0);
  });
  EXPECT_NEAR(static_cast<double>(beyond) / kSamples, 0.1, 0.002);
}

TEST(LaplaceTest, DeterministicUnderSeed) {
  EXPECT_EQ(draw(99, 1.0, 1000), draw(99, 1.0, 1000));
  EXPECT_NE(draw(99, 1.0, 10), draw(100, 1.0, 10));
}

TEST(LaplaceTest, ScaleIsExactlyLinear) {
  const std::vector<double> a = draw(5, 1.0, 1000);
  const std::vector<double> b = draw(5, 2.0, 1000);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(b[i], 2.0 * a[i]);
}

TEST(LaplaceTest, RejectsNonPositiveScale) {
  NoiseSource rng(0);
  EXPECT_THROW(laplace_sample(rng, 0.0), std::invalid_argument);
  EXPECT_THROW(laplace_sample(rng, -1.0), std::invalid_argument);
  EXPECT_THROW(laplace_sample(rng, std::nan("")), std::invalid_argument);
}

TEST(LaplaceTest, OneUniformPerSample) {
  NoiseSource rng(3);
  for (int i = 0; i < 10; ++i) laplace_sample(rng, 1.0);
  EXPECT_EQ(rng.draws(), 10u);
}

}  // namespace
}  // namespace survdp
