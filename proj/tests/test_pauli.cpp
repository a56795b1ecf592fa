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

#include "mfpart/pauli.hpp"
#include "support/oracle.hpp"

using namespace mfpart;

namespace {

PauliWord W(int n, const char* s) { return PauliWord::from_string(n, s); }

}  // namespace

TEST(PauliWord, ParsesAndPrints) {
  const PauliWord w = W(4, "X0 Z3 Y1");
  EXPECT_EQ(w.axis(0), Axis::X);
  EXPECT_EQ(w.axis(1), Axis::Y);
  EXPECT_EQ(w.axis(2), Axis::I);
  EXPECT_EQ(w.axis(3), Axis::Z);
  EXPECT_EQ(w.weight(), 3);
  EXPECT_EQ(w.str(), "X0 Y1 Z3");
  EXPECT_TRUE(W(2, "I").is_identity());
  EXPECT_TRUE(W(2, "").is_identity());
  EXPECT_EQ(W(2, "I").str(), "I");
}

TEST(PauliWord, RejectsBadInput) {
  EXPECT_THROW(W(2, "X2"), std::out_of_range);
  EXPECT_THROW(W(2, "Q0"), std::invalid_argument);
  EXPECT_THROW(W(2, "X0 Z0"), std::invalid_argument);
  EXPECT_THROW(PauliWord(65), std::invalid_argument);
  EXPECT_THROW(PauliWord(-1), std::invalid_argument);
}

TEST(PauliWord, SixtyFourQubits) {
  const PauliWord w = W(64, "X63 Z0");
  EXPECT_EQ(w.axis(63), Axis::X);
  EXPECT_EQ(w.weight(), 2);
  EXPECT_TRUE(commutes(w, W(64, "X0 X63")) == false);
}

TEST(PauliWord, SingleQubitProductTable) {
  // XY = iZ, YZ = iX, ZX = iY and the reversed products carry -i.
  const struct {
    const char* a;
    const char* b;
    const char* w;
    std::complex<double> phase;
  } table[] = {
      {"X0", "Y0", "Z0", {0, 1}},  {"Y0", "Z0", "X0", {0, 1}},  {"Z0", "X0", "Y0", {0, 1}},
      {"Y0", "X0", "Z0", {0, -1}}, {"Z0", "Y0", "X0", {0, -1}}, {"X0", "Z0", "Y0", {0, -1}},
      {"X0", "X0", "I", {1, 0}},   {"Y0", "Y0", "I", {1, 0}},   {"Z0", "Z0", "I", {1, 0}},
  };
  for (const auto& row : table) {
    const auto [ph, w] = multiply_words(W(1, row.a), W(1, row.b));
    EXPECT_EQ(w, W(1, row.w)) << row.a << row.b;
    EXPECT_NEAR(std::abs(ph.value() - row.phase), 0.0, 1e-15) << row.a << row.b;
  }
}

TEST(PauliWord, ProductMatchesKroneckerOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const PauliWord p = oracle::random_word(rng, n);
    const PauliWord q = oracle::random_word(rng, n);
    const auto [ph, r] = multiply_words(p, q);
    const oracle::Mat lhs = oracle::word(p) * oracle::word(q);
    const oracle::Mat rhs = ph.value() * oracle::word(r);
    ASSERT_LT((lhs - rhs).norm(), 1e-12) << p.str() << " * " << q.str();
  }
}

TEST(PauliWord, CommutationMatchesOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const PauliWord p = oracle::random_word(rng, n);
    const PauliWord q = oracle::random_word(rng, n);
    const oracle::Mat a = oracle::word(p);
    const oracle::Mat b = oracle::word(q);
    const bool dense_commute = (a * b - b * a).norm() < 1e-12;
    ASSERT_EQ(commutes(p, q), dense_commute) << p.str() << " , " << q.str();
    // Qubit-wise commuting implies commuting.
    if (qwc_commutes(p, q)) {
      ASSERT_TRUE(commutes(p, q));
    }
  }
}

TEST(PauliWord, QubitWiseCommutation) {
  EXPECT_TRUE(qwc_commutes(W(3, "Z0 Z1"), W(3, "Z1 Z2")));
  EXPECT_FALSE(qwc_commutes(W(3, "Z0 Z1"), W(3, "X0 X1")));
  EXPECT_TRUE(commutes(W(3, "Z0 Z1"), W(3, "X0 X1")));
  EXPECT_TRUE(qwc_commutes(W(3, "X0"), W(3, "Y1")));
  EXPECT_THROW(commutes(W(2, "X0"), W(3, "X0")), std::invalid_argument);
}

TEST(PauliWord, CanonicalOrderIsLowestQubitFirst) {
  const int n = 2;
  EXPECT_LT(W(n, "I"), W(n, "X0"));
  EXPECT_LT(W(n, "X0"), W(n, "Y0"));
  EXPECT_LT(W(n, "Y0"), W(n, "Z0"));
  EXPECT_LT(W(n, "X0 Z1"), W(n, "Y0"));
  EXPECT_LT(W(n, "X1"), W(n, "X0"));
}

TEST(PauliSum, ArithmeticAndCanonicalForm) {
  PauliSum a(2, {{"X0 Z1", 1.0}, {"Y1", 2.0}});
  PauliSum b(2, {{"X0 Z1", -1.0}, {"Z0", 0.5}});
  PauliSum s = a + b;
  EXPECT_EQ(s.size(), 2U);
  EXPECT_DOUBLE_EQ(s.coefficient(W(2, "Y1")), 2.0);
  EXPECT_DOUBLE_EQ(s.coefficient(W(2, "X0 Z1")), 0.0);
  PauliSum d = a - a;
  EXPECT_TRUE(d.empty());
  PauliSum scaled = a * 3.0;
  EXPECT_DOUBLE_EQ(scaled.coefficient(W(2, "Y1")), 6.0);
  EXPECT_DOUBLE_EQ(a.norm(), std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(a.max_abs_coefficient(), 2.0);
  EXPECT_EQ(a.support_qubits(), (std::vector<int>{0, 1}));
}

TEST(PauliSum, PrunesBelowThreshold) {
  PauliSum s(1);
  s.add(W(1, "X0"), 1e-14);
  s.add(W(1, "Z0"), 1.0);
  s.canonicalize();
  EXPECT_EQ(s.size(), 1U);
}

TEST(PauliSum, DenseIsLinear) {
  std::mt19937_64 rng(13);
  const PauliSum a = oracle::random_sum(rng, 3, 8);
  const PauliSum b = oracle::random_sum(rng, 3, 8);
  EXPECT_LT((oracle::dense(a + b * 2.0) - oracle::dense(a) - 2.0 * oracle::dense(b)).norm(), 1e-12);
  const oracle::Mat m = oracle::dense(a);
  EXPECT_LT((m - m.adjoint()).norm(), 1e-12);
}

TEST(PauliSum, CommutatorMatchesOracle) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const PauliSum a = oracle::random_sum(rng, 3, 6);
    const PauliSum b = oracle::random_sum(rng, 3, 6);
    const oracle::Mat A = oracle::dense(a);
    const oracle::Mat B = oracle::dense(b);
    const oracle::Mat expected = (A * B - B * A) / std::complex<double>(0, 1);
    ASSERT_LT((oracle::dense(commutator_over_i(a, b)) - expected).norm(), 1e-10);
  }
}

TEST(SingleQubitOp, EigenvaluesAndEmbedding) {
  const SingleQubitOp o(1, {1.0, 2.0, 2.0}, 0.5);
  const auto [hi, lo] = o.eigenvalues();
  EXPECT_DOUBLE_EQ(hi, 3.5);
  EXPECT_DOUBLE_EQ(lo, -2.5);
  const auto u = o.unit();
  EXPECT_NEAR(u[0] * u[0] + u[1] * u[1] + u[2] * u[2], 1.0, 1e-15);
  const oracle::Mat expected =
      oracle::bloch(2, 1, 1.0, 2.0, 2.0) + 0.5 * oracle::Mat::Identity(4, 4);
  EXPECT_LT((oracle::dense(o.as_sum(2)) - expected).norm(), 1e-12);
  EXPECT_THROW(SingleQubitOp(0, {0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(SingleQubitOp, AttachBuildsProduct) {
  const PauliSum h(2, {{"Z1", 2.0}, {"X1", -1.0}});
  const SingleQubitOp o(0, {0.0, 1.0, 0.0});
  const PauliSum p = attach(h, o);
  const oracle::Mat expected = oracle::dense(h) * oracle::bloch(2, 0, 0, 1, 0);
  EXPECT_LT((oracle::dense(p) - expected).norm(), 1e-12);
  EXPECT_THROW(attach(PauliSum(2, {{"Z0", 1.0}}), o), std::invalid_argument);
}
