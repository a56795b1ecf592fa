// Copyright 2026 The mfpart Authors
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

#include <gtest/gtest.h>

#include <random>

#include "mfpart/io.hpp"
#include "mfpart/qwc.hpp"
#include "support/oracle.hpp"

using namespace mfpart;

TEST(QwcPartition, GroupsArePairwiseQubitWiseCommuting) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const PauliSum h = oracle::random_sum(rng, n, 5 + static_cast<int>(rng() % 40));
    const QWCGrouping g = qwc_partition(h);
    PauliSum total(n);
    for (const PauliSum& grp : g.groups) {
      ASSERT_FALSE(grp.empty());
      for (const auto& [a, ca] : grp) {
        for (const auto& [b, cb] : grp) ASSERT_TRUE(qwc_commutes(a, b)) << a.str() << " " << b.str();
      }
      total += grp;
    }
    EXPECT_EQ(max_abs_difference(total, h), 0.0);
    EXPECT_EQ(qwc_group_count(h), g.groups.size());
  }
}

TEST(QwcPartition, LargestCoefficientsSeedGroups) {
  PauliSum h(2, {{"X0", 0.1}, {"Z0", 5.0}, {"Z1", 1.0}, {"X0 X1", 2.0}});
  const QWCGrouping g = qwc_partition(h);
  ASSERT_EQ(g.groups.size(), 2U);
  EXPECT_DOUBLE_EQ(g.groups[0].coefficient(PauliWord::from_string(2, "Z0")), 5.0);
  EXPECT_DOUBLE_EQ(g.groups[0].coefficient(PauliWord::from_string(2, "Z1")), 1.0);
  EXPECT_DOUBLE_EQ(g.groups[1].coefficient(PauliWord::from_string(2, "X0 X1")), 2.0);
}

TEST(QwcPartition, Deterministic) {
  std::mt19937_64 rng(22);
  const PauliSum h = oracle::random_sum(rng, 5, 40);
  const QWCGrouping a = qwc_partition(h);
  const QWCGrouping b = qwc_partition(h);
  ASSERT_EQ(a.groups.size(), b.groups.size());
  for (std::size_t i = 0; i < a.groups.size(); ++i) EXPECT_EQ(a.groups[i], b.groups[i]);
}

TEST(QwcPartition, H2StructureHasThreeGroups) {
  const PauliSum h = load_hamiltonian(MFPART_DATA_DIR "/h2_structure.ham");
  EXPECT_EQ(qwc_partition(h).groups.size(), 3U);
}

TEST(QwcPartition, SingleGroupFixture) {
  const PauliSum h = load_hamiltonian(MFPART_DATA_DIR "/single_group.ham");
  EXPECT_EQ(qwc_group_count(h), 1U);
}

TEST(QwcPartition, EmptyInputThrows) {
  EXPECT_THROW(qwc_partition(PauliSum(2)), std::invalid_argument);
  EXPECT_EQ(qwc_group_count(PauliSum(2)), 0U);
}
