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

#ifndef MFPART_DENSE_HPP
#define MFPART_DENSE_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "mfpart/pauli.hpp"

namespace mfpart {

using cplx = std::complex<double>;

/// Default size cap for dense matrices.
inline constexpr int kDenseQubitCap = 12;

namespace detail {

// Amplitude index bits follow the order of `qubits` (qubits[j] -> bit j).
inline std::uint64_t gather_bits(std::uint64_t mask, const std::vector<int>& qubits) {
  std::uint64_t out = 0;
  for (std::size_t j = 0; j < qubits.size(); ++j) {
    if ((mask >> qubits[j]) & 1U) out |= std::uint64_t{1} << j;
  }
  return out;
}

// P|i> = i^{|x&z|} (-1)^{|i&z|} |i ^ x>
inline void accumulate_word(Eigen::MatrixXcd& m, std::uint64_t x, std::uint64_t z,
                            cplx coefficient) {
  const int y_count = std::popcount(x & z);
  const cplx base = coefficient * Phase{static_cast<std::uint8_t>(y_count & 3)}.value();
  const auto dim = static_cast<std::uint64_t>(m.rows());
  for (std::uint64_t i = 0; i < dim; ++i) {
    const double sign = (std::popcount(i & z) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(i ^ x), static_cast<Eigen::Index>(i)) += sign * base;
  }
}

}  // namespace detail

/// Dense matrix of `w` restricted to `qubits` (little-endian in that order).
/// Factors of `w` outside `qubits` are ignored.
inline Eigen::MatrixXcd word_matrix_on(const PauliWord& w, const std::vector<int>& qubits) {
  const auto dim = Eigen::Index{1} << qubits.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  detail::accumulate_word(m, detail::gather_bits(w.x_mask(), qubits),
                          detail::gather_bits(w.z_mask(), qubits), 1.0);
  return m;
}

inline Eigen::MatrixXcd to_dense(const PauliSum& h, int cap = kDenseQubitCap) {
  if (h.n_qubits() > cap) {
    throw std::invalid_argument("to_dense: " + std::to_string(h.n_qubits()) +
                                " qubits exceeds cap " + std::to_string(cap));
  }
  const auto dim = Eigen::Index{1} << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [w, c] : h) detail::accumulate_word(m, w.x_mask(), w.z_mask(), c);
  return m;
}

/// All 4^k words over `subset`. Index digit j (base 4) is the Axis on
/// subset[j]; index 0 is the identity.
inline std::vector<PauliWord> subset_words(int n_qubits, const std::vector<int>& subset) {
  std::size_t count = 1;
  for (std::size_t j = 0; j < subset.size(); ++j) count *= 4;
  std::vector<PauliWord> out;
  out.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    PauliWord w(n_qubits);
    std::size_t rest = idx;
    for (int q : subset) {
      w = w.with_axis(q, static_cast<Axis>(rest % 4));
      rest /= 4;
    }
    out.push_back(w);
  }
  return out;
}

/// Pauli expansion of a Hermitian matrix over `qubits` of an n-qubit
/// register: c_P = Re tr(P M) / 2^k.
inline PauliSum from_dense_on(const Eigen::MatrixXcd& m, int n_qubits,
                              const std::vector<int>& qubits,
                              double prune = kPruneThreshold) {
  const auto dim = Eigen::Index{1} << qubits.size();
  if (m.rows() != dim || m.cols() != dim) {
    throw std::invalid_argument("from_dense_on: matrix size does not match qubit list");
  }
  PauliSum out(n_qubits);
  for (const PauliWord& w : subset_words(n_qubits, qubits)) {
    const Eigen::MatrixXcd p = word_matrix_on(w, qubits);
    const cplx tr = (p * m).trace();
    out.add(w, tr.real() / static_cast<double>(dim));
  }
  return out.canonicalize(prune);
}

inline PauliSum from_dense(const Eigen::MatrixXcd& m, int n_qubits,
                           double prune = kPruneThreshold) {
  std::vector<int> all(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) all[static_cast<std::size_t>(q)] = q;
  return from_dense_on(m, n_qubits, all, prune);
}

}  // namespace mfpart

#endif  // MFPART_DENSE_HPP
