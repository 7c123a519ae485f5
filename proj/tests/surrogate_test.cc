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

#include "survdp/surrogate.h"

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.h"

namespace survdp {
namespace {

using testing::toy_grid;
using testing::vec;

ProbMass toy_prob() {
  return ProbMass(toy_grid(), vec({0, 0.2, 0.2, 0, 0.3, 0, 0.3}));
}

TEST(SurrogateTest, ToyVector) {
  const SurvivalDataset out =
      generate_surrogate(toy_prob(), SurrogateConfig{10});
  const SurvivalDataset expected = {
      {1, true}, {1, true}, {2, true},  {2, true},  {4, true},
      {4, true}, {4, true}, {5, false}, {5, false}, {5, false}};
  EXPECT_EQ(testing::sorted(out), expected);
}

TEST(SurrogateTest, AllMassBeyondStudy) {
  const ProbMass y(toy_grid(), vec({0, 0, 0, 0, 0, 0, 1}));
  const SurvivalDataset out = generate_surrogate(y, SurrogateConfig{7});
  ASSERT_EQ(out.size(), 7u);
  for (const auto& r : out) {
    EXPECT_EQ(r.time, 5);
    EXPECT_FALSE(r.event);
  }
}

TEST(SurrogateTest, NegativeMassIgnored) {
  const ProbMass y(toy_grid(), vec({0, -0.1, 0.6, 0, 0, 0, 0.5}));
  EXPECT_EQ(generate_surrogate(y, SurrogateConfig{10}).size(), 11u);
}

TEST(SurrogateTest, SizeWithinRoundingSlack) {
  NoiseSource rng(1);
  for (int rep = 0; rep < 200; ++rep) {
    const TimeGrid g = build_grid(20, 1);
    const ProbMass y =
        km_to_prob(KMCurve(g, testing::random_curve(rng, g.size())));
    const auto n = static_cast<std::int64_t>(1 + rng.uniform_index(500));
    const auto size =
        static_cast<double>(generate_surrogate(y, SurrogateConfig{n}).size());
    const double slack = static_cast<double>(g.size() + 1) / 2.0;
    EXPECT_GE(size, static_cast<double>(n) - slack);
    EXPECT_LE(size, static_cast<double>(n) + slack);
  }
}

TEST(SurrogateTest, RecordsOnGrid) {
  NoiseSource rng(2);
  const TimeGrid g = build_grid(13, 0.5);
  const ProbMass y =
      km_to_prob(KMCurve(g, testing::random_curve(rng, g.size())));
  for (const auto& r : generate_surrogate(y, SurrogateConfig{1000})) {
    EXPECT_NO_THROW(g.index_of(r.time));
    if (!r.event) {
      EXPECT_EQ(r.time, g.last_point());
    }
  }
}

TEST(SurrogateTest, RecoversVectorAsPopulationGrows) {
  const ProbMass y = toy_prob();
  for (std::int64_t n : {1000, 100000}) {
    const SurvivalDataset ds = generate_surrogate(y, SurrogateConfig{n});
    const ProbMass back = km_to_prob(km_estimate(count_events(ds, toy_grid())));
    const double bound =
        static_cast<double>(toy_grid().size() + 2) / static_cast<double>(n);
    EXPECT_LE((back.values() - y.values()).cwiseAbs().maxCoeff(), bound) << n;
  }
}

TEST(SurrogateTest, Deterministic) {
  const SurvivalDataset a = generate_surrogate(toy_prob(), SurrogateConfig{37});
  const SurvivalDataset b = generate_surrogate(toy_prob(), SurrogateConfig{37});
  EXPECT_EQ(a, b);
}

TEST(SurrogateTest, RejectsNonPositiveSize) {
  EXPECT_THROW(generate_surrogate(toy_prob(), SurrogateConfig{0}),
               std::invalid_argument);
}

}  // namespace
}  // namespace survdp
