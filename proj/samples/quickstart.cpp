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

// Partition a small Hamiltonian and sample its energy on the ground state.

#include <iostream>

#include "mfpart/mfpart.hpp"

int main() {
  using namespace mfpart;
  const PauliSum h = parse_hamiltonian(
      "qubits: 4\n"
      "-0.33\n"
      "0.14 Z1\n-0.13 Z2\n0.16 Z3\n"
      "0.11 Z0 Z2\n0.16 Z1 Z3\n0.12 Z2 Z3\n"
      "0.16 Z0 Z1 Z2\n0.04 Z1 Z2 Z3\n0.04 Z0 Z1 Z2 Z3\n0.17 Z0 Z1 Z3\n"
      "0.04 Y1 Z2 Y3\n0.04 Z0 Y1 Z2 Y3\n0.04 X1 Z2 X3\n0.04 Z0 X1 Z2 X3\n");

  std::cout << "QWC groups: " << qwc_group_count(h) << "\n";
  for (auto level : {PartitionLevel::mf1, PartitionLevel::mf2}) {
    const PartitionPlan plan = greedy_partition(h, level);
    std::cout << to_string(level) << " fragments: " << plan.fragments.size() << "\n";
  }

  const PartitionPlan plan = greedy_partition(h, PartitionLevel::mf2);
  const GroundState gs = eigensolve(h);
  EstimatorOptions opt;
  opt.shots = 1000;
  opt.seed = 1;
  const EstimatorReport rep = estimate_energy(plan, gs.state, opt);
  std::cout << "exact energy " << gs.energy << ", sampled " << rep.energy
            << ", summed variance " << rep.summed_variance << "\n";
}
