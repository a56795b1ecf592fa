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

#ifndef MFPART_QWC_HPP
#define MFPART_QWC_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "mfpart/pauli.hpp"

namespace mfpart {

/// Partition of a Hamiltonian into qubit-wise commuting groups.
struct QWCGrouping {
  std::vector<PauliSum> groups;
  PauliSum source;
};

namespace detail {

// A QWC group is characterised by the letter it fixes on each touched qubit.
struct QwcSlot {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  bool accepts(const PauliWord& w) const {
    const std::uint64_t both = w.support() & (x | z);
    const std::uint64_t differ = (w.x_mask() ^ x) | (w.z_mask() ^ z);
    return (both & differ) == 0;
  }
  void absorb(const PauliWord& w) {
    x |= w.x_mask();
    z |= w.z_mask();
  }
};

inline std::vector<std::pair<PauliWord, double>> qwc_order(const PauliSum& h) {
  std::vector<std::pair<PauliWord, double>> items(h.begin(), h.end());
  // Map iteration is already in canonical order, so a stable sort keeps it
  // as the tie-breaker.
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return std::abs(a.second) > std::abs(b.second);
  });
  return items;
}

}  // namespace detail

/// Greedy first-fit QWC grouping over terms sorted by descending |c|.
inline QWCGrouping qwc_partition(const PauliSum& h) {
  if (h.empty()) throw std::invalid_argument("qwc_partition: empty Hamiltonian");
  std::vector<detail::QwcSlot> slots;
  QWCGrouping out{{}, h};
  for (const auto& [w, c] : detail::qwc_order(h)) {
    std::size_t g = 0;
    while (g < slots.size() && !slots[g].accepts(w)) ++g;
    if (g == slots.size()) {
      slots.emplace_back();
      out.groups.emplace_back(h.n_qubits());
    }
    slots[g].absorb(w);
    out.groups[g].add(w, c);
  }
  return out;
}

/// Group count only; avoids materialising the groups.
inline std::size_t qwc_group_count(const PauliSum& h) {
  if (h.empty()) return 0;
  std::vector<detail::QwcSlot> slots;
  for (const auto& [w, c] : detail::qwc_order(h)) {
    std::size_t g = 0;
    while (g < slots.size() && !slots[g].accepts(w)) ++g;
    if (g == slots.size()) slots.emplace_back();
    slots[g].absorb(w);
  }
  return slots.size();
}

}  // namespace mfpart

#endif  // MFPART_QWC_HPP
