// Copyright 2026 The cpac Authors
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

#include "cpac/reduction.h"

#include <gtest/gtest.h>

#include "cpac/errors.h"
#include "cpac/verify/random.h"
#include "test_util.h"

namespace cpac {
namespace {

TEST(SetCoverToPac, SingleSubset) {
  const SetCoverInstance sc{1, {{0}}};
  const ReducedInstance red = set_cover_to_pac(sc);
  EXPECT_EQ(red.num_subsets, 1u);
  EXPECT_EQ(red.num_elements, 1u);
  const Instance& inst = red.instance;
  EXPECT_EQ(inst.domain().size, 2u);
  ASSERT_EQ(inst.num_hypotheses(), 2u);
  EXPECT_EQ(inst.hypotheses()[0], (Hypothesis{0, 0}));
  EXPECT_EQ(inst.hypotheses()[1], (Hypothesis{1, 1}));
  EXPECT_DOUBLE_EQ(inst.epsilon(), 0.25);
  EXPECT_DOUBLE_EQ(inst.delta(), 0.5);
  EXPECT_EQ(min_eliminating_sample_count(red), 1u);
}

TEST(SetCoverToPac, RegionsFollowMembership) {
  const SetCoverInstance sc{3, {{0, 1}, {1, 2}, {2}}};
  const ReducedInstance red = set_cover_to_pac(sc);
  const auto& hs = red.instance.hypotheses();
  for (std::size_t u = 0; u < 3; ++u) {
    PointSet in_x1;
    for (std::size_t x : disagreement_region(hs[0], hs[u + 1])) {
      if (x < red.num_subsets) in_x1.push_back(x);
    }
    PointSet expected;
    for (std::size_t j = 0; j < sc.subsets.size(); ++j) {
      const auto& s = sc.subsets[j];
      if (std::find(s.begin(), s.end(), u) != s.end()) expected.push_back(j);
    }
    EXPECT_EQ(in_x1, expected) << "element " << u;
  }
}

TEST(SetCoverToPac, IdenticalSubsetsStillGiveDistinctHypotheses) {
  // Two elements with the same membership differ only on the y block.
  const SetCoverInstance sc{2, {{0, 1}, {0, 1}}};
  EXPECT_NO_THROW(set_cover_to_pac(sc));
}

TEST(MinEliminating, PairCoveringSubset) {
  const SetCoverInstance sc{2, {{0}, {1}, {0, 1}}};
  EXPECT_EQ(min_eliminating_sample_count(set_cover_to_pac(sc)), 1u);
}

TEST(BruteForceSetCover, SingleSubsetCoversAll) {
  EXPECT_EQ(brute_force_set_cover({4, {{0, 1}, {0, 1, 2, 3}, {3}}}), 1u);
}

TEST(BruteForceSetCover, DisjointSingletons) {
  EXPECT_EQ(brute_force_set_cover({5, {{0}, {1}, {2}, {3}, {4}}}), 5u);
}

TEST(BruteForceSetCover, TooManySubsetsIsCapacityError) {
  SetCoverInstance sc{1, std::vector<std::vector<std::size_t>>(21, {0})};
  EXPECT_THROW(brute_force_set_cover(sc), CapacityError);
}

TEST(SetCoverInstance, UncoveredElementIsRejected) {
  const SetCoverInstance sc{3, {{0}, {1}}};
  EXPECT_THROW(sc.validate(), ValidationError);
  EXPECT_THROW(set_cover_to_pac(sc), ValidationError);
}

TEST(SetCoverInstance, JsonRoundTripAndFixture) {
  const SetCoverInstance sc = load_set_cover(testing::data_path("setcover.json"));
  EXPECT_EQ(sc.universe_size, 5u);
  const SetCoverInstance back = set_cover_from_json(set_cover_to_json(sc));
  EXPECT_EQ(back.subsets, sc.subsets);
  EXPECT_EQ(brute_force_set_cover(sc), 2u);
}

TEST(Reduction, MatchesBruteForceOnRandomInstances) {
  verify::Rng rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    const SetCoverInstance sc = verify::random_set_cover(rng, 8, 6);
    EXPECT_EQ(min_eliminating_sample_count(set_cover_to_pac(sc)),
              brute_force_set_cover(sc))
        << "trial " << trial;
  }
}

}  // namespace
}  // namespace cpac
