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

#include <clocale>
#include <random>

#include "mfpart/io.hpp"
#include "support/oracle.hpp"

using namespace mfpart;

namespace {

std::size_t error_line(const std::string& path) {
  try {
    load_hamiltonian(path);
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(path), std::string::npos) << e.what();
    return e.line();
  }
  ADD_FAILURE() << path << " parsed without error";
  return 9999;
}

}  // namespace

TEST(ParseHamiltonian, BasicFormat) {
  const PauliSum h = parse_hamiltonian("# comment\n0.5 X0 Z2  # trailing\n\n-1 y1\n2\n");
  EXPECT_EQ(h.n_qubits(), 3);
  EXPECT_EQ(h.size(), 3U);
  EXPECT_DOUBLE_EQ(h.coefficient(PauliWord::from_string(3, "X0 Z2")), 0.5);
  EXPECT_DOUBLE_EQ(h.coefficient(PauliWord::from_string(3, "Y1")), -1.0);
  EXPECT_DOUBLE_EQ(h.constant(), 2.0);
}

TEST(ParseHamiltonian, HeaderAndDuplicates) {
  const PauliSum h = parse_hamiltonian("qubits: 5\n1 Z0\n2.5 Z0\n");
  EXPECT_EQ(h.n_qubits(), 5);
  EXPECT_EQ(h.size(), 1U);
  EXPECT_DOUBLE_EQ(h.coefficient(PauliWord::from_string(5, "Z0")), 3.5);
  // Exact cancellation keeps nothing but is still a valid (zero) operator.
  EXPECT_TRUE(parse_hamiltonian("1 Z0\n-1 Z0\n").empty());
}

TEST(ParseHamiltonian, CrlfAndExponents) {
  const PauliSum h = parse_hamiltonian("1e-3 X0\r\n+2.5E1 Z1\r\n");
  EXPECT_DOUBLE_EQ(h.coefficient(PauliWord::from_string(2, "X0")), 1e-3);
  EXPECT_DOUBLE_EQ(h.coefficient(PauliWord::from_string(2, "Z1")), 25.0);
}

TEST(ParseHamiltonian, IgnoresLocale) {
  const char* prev = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = prev ? prev : "C";
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");  // may be unavailable; harmless then
  const PauliSum h = parse_hamiltonian("0.25 X0\n");
  EXPECT_DOUBLE_EQ(h.coefficient(PauliWord::from_string(1, "X0")), 0.25);
  EXPECT_EQ(serialize_hamiltonian(h), "qubits: 1\n0.25 X0\n");
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(ParseHamiltonian, Fixtures) {
  const PauliSum b = load_hamiltonian(MFPART_DATA_DIR "/three_qubit_model.ham");
  EXPECT_EQ(b.n_qubits(), 3);
  EXPECT_EQ(b.size(), 24U);
  EXPECT_DOUBLE_EQ(b.coefficient(PauliWord::from_string(3, "Y0 Y1 Z2")), 14.0);
  const PauliSum h2 = load_hamiltonian(MFPART_DATA_DIR "/h2_structure.ham");
  EXPECT_EQ(h2.n_qubits(), 4);
  EXPECT_EQ(h2.size(), 15U);
}

TEST(ParseHamiltonian, BadFixturesReportLines) {
  const std::string dir = MFPART_DATA_DIR "/bad/";
  EXPECT_EQ(error_line(dir + "repeated_qubit.ham"), 1U);
  EXPECT_EQ(error_line(dir + "index_out_of_range.ham"), 2U);
  EXPECT_EQ(error_line(dir + "empty.ham"), 0U);
  EXPECT_EQ(error_line(dir + "malformed_coefficient.ham"), 2U);
  EXPECT_EQ(error_line(dir + "non_finite.ham"), 2U);
  EXPECT_EQ(error_line(dir + "bad_axis.ham"), 1U);
}

TEST(ParseHamiltonian, InlineErrors) {
  EXPECT_THROW(parse_hamiltonian("1 X\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian("1 X-1\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian("1 X64\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian("inf Z0\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian("1 Z0\nqubits: 2\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian("qubits: 2\nqubits: 2\n1 Z0\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian("qubits: 0\n1 Z0\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian(""), ParseError);
  EXPECT_THROW(load_hamiltonian(MFPART_DATA_DIR "/does_not_exist.ham"), std::runtime_error);
  try {
    parse_hamiltonian("1 Z0\n\n1 W3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3U);
    EXPECT_EQ(std::string(e.what()).rfind("line 3:", 0), 0U) << e.what();
  }
}

TEST(SerializeHamiltonian, RoundTripsExactly) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    PauliSum h = oracle::random_sum(rng, n, 1 + static_cast<int>(rng() % 20));
    // Awkward magnitudes exercise the shortest round-trip formatting.
    h = h * std::ldexp(1.0, static_cast<int>(rng() % 40) - 20);
    if (h.empty()) continue;
    const PauliSum back = parse_hamiltonian(serialize_hamiltonian(h));
    ASSERT_EQ(back.n_qubits(), n);
    ASSERT_EQ(max_abs_difference(back, h), 0.0);
  }
}

TEST(State, ParseAndRenormalize) {
  const LoadedState ok = parse_state("0.6 0\n0 0.8\n");
  EXPECT_EQ(ok.state.n_qubits, 1);
  EXPECT_TRUE(ok.warning.empty());
  EXPECT_NEAR(ok.state.norm(), 1.0, 1e-15);

  const LoadedState off = parse_state("1 0\n1 0\n0 0\n0 0\n");
  EXPECT_EQ(off.state.n_qubits, 2);
  EXPECT_NEAR(off.original_norm, std::sqrt(2.0), 1e-15);
  EXPECT_FALSE(off.warning.empty());
  EXPECT_NEAR(std::abs(off.state.amplitudes(0)), 1.0 / std::sqrt(2.0), 1e-15);

  // Tiny deviations renormalize silently.
  EXPECT_TRUE(parse_state("1.0000001 0\n0 0\n").warning.empty());
}

TEST(State, Errors) {
  EXPECT_THROW(parse_state("1 0\n0 0\n0 0\n"), ParseError);
  EXPECT_THROW(parse_state("0 0\n0 0\n"), ParseError);
  EXPECT_THROW(parse_state(""), ParseError);
  try {
    parse_state("1 0\n0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2U);
  }
}

TEST(State, RoundTrip) {
  std::mt19937_64 rng(72);
  const StateVector psi(3, oracle::random_state(rng, 3));
  const LoadedState back = parse_state(serialize_state(psi));
  EXPECT_TRUE(back.warning.empty());
  EXPECT_LT((back.state.amplitudes - psi.amplitudes).norm(), 1e-15);
}

TEST(Plan, RoundTripPreservesFragments) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const PauliSum h = oracle::random_sum(rng, 4, 15);
    if (h.empty()) continue;
    const PartitionPlan plan = greedy_partition(h, trial % 2 ? PartitionLevel::mf2 : PartitionLevel::mf1);
    const PartitionPlan back = parse_plan(serialize_plan(plan, "mf1"));
    ASSERT_EQ(back.fragments.size(), plan.fragments.size());
    ASSERT_EQ(max_abs_difference(back.source, h), 0.0);
    PauliSum total(4);
    for (std::size_t i = 0; i < plan.fragments.size(); ++i) {
      ASSERT_EQ(max_abs_difference(back.fragments[i].hamiltonian, plan.fragments[i].hamiltonian), 0.0);
      ASSERT_EQ(back.fragments[i].certificate.terminal_values,
                plan.fragments[i].certificate.terminal_values);
      ASSERT_EQ(back.fragments[i].entangler.has_value(), plan.fragments[i].entangler.has_value());
      total = sum_add(total, back.fragments[i].hamiltonian, 0.0);
    }
    EXPECT_LT(max_abs_difference(total, h), 1e-12);
    EXPECT_TRUE(validate_plan(back).ok());
  }
}

TEST(Plan, EntanglerSurvivesRoundTrip) {
  const PauliSum h = load_hamiltonian(MFPART_DATA_DIR "/h2_structure.ham");
  const PartitionPlan plan = greedy_partition(h, PartitionLevel::mf2);
  ASSERT_EQ(plan.fragments.size(), 1U);
  const std::string text = serialize_plan(plan, "mf2");
  const nlohmann::json j = nlohmann::json::parse(text);
  EXPECT_EQ(j["fragment_count"], 1);
  EXPECT_EQ(j["qwc_baseline"], 3);
  EXPECT_EQ(j["level"], "mf2");
  EXPECT_FALSE(j["fragments"][0]["entangler"].is_null());
  const PartitionPlan back = parse_plan(text);
  ASSERT_TRUE(back.fragments[0].entangler.has_value());
  EXPECT_EQ(back.fragments[0].entangler->subset, plan.fragments[0].entangler->subset);
  EXPECT_LT((back.fragments[0].entangler->unitary - plan.fragments[0].entangler->unitary).norm(), 1e-15);
  EXPECT_TRUE(validate_plan(back).ok());
}

TEST(Plan, ThreeQubitModelCertificateValues) {
  const PauliSum h = load_hamiltonian(MFPART_DATA_DIR "/three_qubit_model.ham");
  const PartitionPlan plan = greedy_partition(h, PartitionLevel::mf1);
  const nlohmann::json j = plan_to_json(plan, "mf1", qwc_group_count(h));
  ASSERT_EQ(j["fragment_count"], 2);
  // Qubit 0 is measured first in every fragment along (1, 2, 1)/sqrt(6).
  for (const auto& f : j["fragments"]) {
    const auto& first = f["certificate"]["steps"][0];
    ASSERT_TRUE(first["branch"].empty());
    EXPECT_EQ(first["qubit"], 0);
    const double a = 1.0 / std::sqrt(6.0);
    EXPECT_NEAR(first["op"][0].get<double>(), a, 1e-6);
    EXPECT_NEAR(first["op"][1].get<double>(), 2 * a, 1e-6);
    EXPECT_NEAR(first["op"][2].get<double>(), a, 1e-6);
  }
}

TEST(Plan, RejectsMalformedFiles) {
  EXPECT_THROW(parse_plan("{"), ParseError);
  EXPECT_THROW(parse_plan("{}"), ParseError);
  EXPECT_THROW(parse_plan(R"({"format":"other","version":1})"), ParseError);
  const PauliSum h(2, {{"Z0", 1.0}});
  nlohmann::json j = plan_to_json(qwc_plan(h), "qwc", 1);
  j["fragment_count"] = 2;
  EXPECT_THROW(parse_plan(j.dump()), ParseError);
  j = plan_to_json(qwc_plan(h), "qwc", 1);
  j["version"] = 99;
  EXPECT_THROW(parse_plan(j.dump()), ParseError);
}

TEST(Report, JsonShape) {
  const PauliSum h = load_hamiltonian(MFPART_DATA_DIR "/single_group.ham");
  const PartitionPlan plan = qwc_plan(h);
  EstimatorOptions opt;
  opt.shots = 10;
  opt.seed = 4;
  const nlohmann::json j = report_to_json(estimate_energy(plan, StateVector::basis(3, 0), opt));
  EXPECT_EQ(j["seed"], 4);
  EXPECT_EQ(j["fragments"].size(), 1U);
  EXPECT_EQ(j["fragments"][0]["shots"], 10);
}
