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

// Mean-field analysis of qubit Hamiltonians.
//
// For a qubit k every Hamiltonian splits as
//
//   H = h_x X_k + h_y Y_k + h_z Z_k + h_e
//
// with complements h_s that do not touch k. Stacking the coefficient vectors
// of h_x, h_y, h_z as columns of A_k gives the 3x3 Gram matrix S_k = A_k^T A_k
// and l(k) = dim ker S_k:
//
//   l = 2  the complements are collinear, H = hbar O_k + h_e, and the unit
//          Bloch operator O_k commutes with H;
//   l = 1  the complements span a plane, H = h' O'_k + h'' O''_k + h_e;
//   l = 0  no compaction is possible.
//
// A Hamiltonian is mean-field when a chain of commuting single-qubit operators
// reduces it, branch by branch, to a scalar. verify_mf() searches for such a
// chain over every measurement outcome and returns it as a certificate.

#ifndef MFPART_MEAN_FIELD_HPP
#define MFPART_MEAN_FIELD_HPP

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfpart/pauli.hpp"

namespace mfpart {

struct Tolerances {
  /// Gram eigenvalues at or below kernel * max(1, trace S_k) count as zero.
  double kernel = 1e-8;
  double prune = kPruneThreshold;
  /// Certificate checks: ||[H, O]|| <= commutator * max(1, ||H||).
  double commutator = 1e-9;
};

struct ComplementDecomposition {
  int qubit = 0;
  PauliSum h_x, h_y, h_z, h_e;

  const PauliSum& component(Axis a) const {
    switch (a) {
      case Axis::X: return h_x;
      case Axis::Y: return h_y;
      case Axis::Z: return h_z;
      default: return h_e;
    }
  }

  PauliSum reassemble() const {
    PauliSum out = h_e;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      for (const auto& [w, c] : component(a)) out.add(w.with_axis(qubit, a), c);
    }
    return out.canonicalize(0.0);
  }
};

inline ComplementDecomposition decompose_by_qubit(const PauliSum& h, int k) {
  if (k < 0 || k >= h.n_qubits()) {
    throw std::out_of_range("decompose_by_qubit: qubit " + std::to_string(k) +
                            " out of range");
  }
  const int n = h.n_qubits();
  ComplementDecomposition d{k, PauliSum(n), PauliSum(n), PauliSum(n), PauliSum(n)};
  for (const auto& [w, c] : h) {
    switch (w.axis(k)) {
      case Axis::X: d.h_x.add(w.without(k), c); break;
      case Axis::Y: d.h_y.add(w.without(k), c); break;
      case Axis::Z: d.h_z.add(w.without(k), c); break;
      case Axis::I: d.h_e.add(w, c); break;
    }
  }
  // Words are distinct per component, so no cancellation can occur.
  return d;
}

struct GramData {
  int qubit = 0;
  /// Rows of A_k: complement words in canonical order.
  std::vector<PauliWord> basis;
  Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
  /// Descending.
  Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();
  /// Column i belongs to eigenvalues(i); largest-|component| made positive.
  Eigen::Matrix3d eigenvectors = Eigen::Matrix3d::Identity();
  double tolerance = 0.0;
  int l = 3;
};

namespace detail {

inline void orient(Eigen::Ref<Eigen::Vector3d> v) {
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(v(i)) > std::abs(v(best)) + 1e-12) best = i;
  }
  if (v(best) < 0) v = -v;
}

inline GramData gram_from_rows(int qubit,
                               const std::map<PauliWord, std::array<double, 3>>& rows,
                               const Tolerances& tol) {
  GramData g;
  g.qubit = qubit;
  g.basis.reserve(rows.size());
  for (const auto& [w, v] : rows) {
    g.basis.push_back(w);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) g.gram(a, b) += v[a] * v[b];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g.gram);
  for (int i = 0; i < 3; ++i) {
    g.eigenvalues(i) = es.eigenvalues()(2 - i);
    g.eigenvectors.col(i) = es.eigenvectors().col(2 - i);
    orient(g.eigenvectors.col(i));
  }
  g.tolerance = tol.kernel * std::max(1.0, g.gram.trace());
  g.l = 0;
  for (int i = 0; i < 3; ++i) {
    if (g.eigenvalues(i) <= g.tolerance) ++g.l;
  }
  return g;
}

inline std::map<PauliWord, std::array<double, 3>> complement_rows(const PauliSum& h,
                                                                  int k) {
  std::map<PauliWord, std::array<double, 3>> rows;
  for (const auto& [w, c] : h) {
    const Axis a = w.axis(k);
    if (a == Axis::I) continue;
    rows[w.without(k)][bloch_index(a)] += c;
  }
  return rows;
}

}  // namespace detail

inline GramData compute_l(const ComplementDecomposition& dec,
                          const Tolerances& tol = {}) {
  std::map<PauliWord, std::array<double, 3>> rows;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    for (const auto& [w, c] : dec.component(a)) rows[w][bloch_index(a)] += c;
  }
  return detail::gram_from_rows(dec.qubit, rows, tol);
}

/// Same as compute_l(decompose_by_qubit(h, k)) without building h_e.
inline GramData compute_l(const PauliSum& h, int k, const Tolerances& tol = {}) {
  if (k < 0 || k >= h.n_qubits()) throw std::out_of_range("compute_l: qubit out of range");
  return detail::gram_from_rows(k, detail::complement_rows(h, k), tol);
}

struct L2Factorization {
  SingleQubitOp op;
  PauliSum hbar;
  PauliSum h_e;
};

struct L1Factorization {
  SingleQubitOp op1;  ///< primed: smaller nonzero Gram eigenvalue
  PauliSum h1;
  SingleQubitOp op2;  ///< double-primed: larger eigenvalue
  PauliSum h2;
  PauliSum h_e;
};

namespace detail {

inline SingleQubitOp op_from(int k, const Eigen::Vector3d& v) {
  return SingleQubitOp(k, {v(0), v(1), v(2)});
}

inline PauliSum combine(const ComplementDecomposition& d, const Eigen::Vector3d& v,
                        double prune) {
  PauliSum out(d.h_e.n_qubits());
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    const double f = v(bloch_index(a));
    for (const auto& [w, c] : d.component(a)) out.add(w, f * c);
  }
  return out.canonicalize(prune);
}

}  // namespace detail

/// H = hbar O + h_e, with O the unit Bloch operator along the non-kernel
/// eigenvector.
inline L2Factorization factor_l2(const PauliSum& h, const GramData& g,
                                 const Tolerances& tol = {}) {
  if (g.l != 2) {
    throw std::invalid_argument("factor_l2: qubit " + std::to_string(g.qubit) +
                                " has l = " + std::to_string(g.l));
  }
  const auto d = decompose_by_qubit(h, g.qubit);
  const Eigen::Vector3d v = g.eigenvectors.col(0);
  return {detail::op_from(g.qubit, v), detail::combine(d, v, tol.prune),
          canonicalize(d.h_e, tol.prune)};
}

/// H = h' O' + h'' O'' + h_e from the two non-kernel eigenvectors.
inline L1Factorization factor_l1(const PauliSum& h, const GramData& g,
                                 const Tolerances& tol = {}) {
  if (g.l != 1) {
    throw std::invalid_argument("factor_l1: qubit " + std::to_string(g.qubit) +
                                " has l = " + std::to_string(g.l));
  }
  const auto d = decompose_by_qubit(h, g.qubit);
  const Eigen::Vector3d small = g.eigenvectors.col(1);
  const Eigen::Vector3d large = g.eigenvectors.col(0);
  return {detail::op_from(g.qubit, small), detail::combine(d, small, tol.prune),
          detail::op_from(g.qubit, large), detail::combine(d, large, tol.prune),
          canonicalize(d.h_e, tol.prune)};
}

/// <phi|H|phi> over qubit o.qubit, where phi is the eigenstate of the unit
/// Bloch operator with eigenvalue `outcome`.
inline PauliSum reduce_qubit(const PauliSum& h, const SingleQubitOp& o, int outcome,
                             double prune = kPruneThreshold) {
  if (outcome != 1 && outcome != -1) {
    throw std::invalid_argument("reduce_qubit: outcome must be +1 or -1");
  }
  const auto n = o.unit();
  const int k = o.qubit;
  PauliSum out(h.n_qubits());
  for (const auto& [w, c] : h) {
    const Axis a = w.axis(k);
    if (a == Axis::I) {
      out.add(w, c);
    } else {
      out.add(w.without(k), c * outcome * n[bloch_index(a)]);
    }
  }
  return out.canonicalize(prune);
}

/// Outcome sequence (+1 / -1 per measured qubit).
using Branch = std::vector<int>;

struct ReductionStep {
  int qubit = 0;
  SingleQubitOp op;
};

/// Feedforward measurement recipe: the operator to measure next depends on
/// the outcomes so far. Every full branch ends in a scalar energy.
struct MFCertificate {
  int n_qubits = 0;
  std::vector<int> support;
  std::map<Branch, ReductionStep> steps;
  std::map<Branch, double> terminal_values;

  std::size_t depth() const { return support.size(); }
};

namespace detail {

inline std::optional<ReductionStep> find_commuting_step(const PauliSum& h,
                                                        std::uint64_t remaining,
                                                        const Tolerances& tol) {
  const std::uint64_t present = h.support();
  for (int q = 0; q < h.n_qubits(); ++q) {
    if (!((remaining >> q) & 1U)) continue;
    if (!((present >> q) & 1U)) return ReductionStep{q, SingleQubitOp::along(q, Axis::Z)};
    const GramData g = compute_l(h, q, tol);
    if (g.l >= 2) return ReductionStep{q, op_from(q, g.eigenvectors.col(0))};
  }
  return std::nullopt;
}

inline bool build_chain(const PauliSum& h, std::uint64_t remaining, Branch& prefix,
                        MFCertificate& cert, const Tolerances& tol) {
  if (remaining == 0) {
    for (const auto& [w, c] : h) {
      if (!w.is_identity()) return false;
    }
    cert.terminal_values[prefix] = h.constant();
    return true;
  }
  const auto step = find_commuting_step(h, remaining, tol);
  if (!step) return false;
  cert.steps[prefix] = *step;
  const std::uint64_t rest = remaining & ~(std::uint64_t{1} << step->qubit);
  for (int outcome : {1, -1}) {
    const PauliSum reduced = reduce_qubit(h, step->op, outcome, tol.prune);
    prefix.push_back(outcome);
    const bool ok = build_chain(reduced, rest, prefix, cert, tol);
    prefix.pop_back();
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

/// Searches every outcome branch for a reductive chain. Exponential in the
/// support size; fine up to a dozen qubits.
inline std::optional<MFCertificate> verify_mf(const PauliSum& h,
                                              const Tolerances& tol = {}) {
  MFCertificate cert;
  cert.n_qubits = h.n_qubits();
  cert.support = h.support_qubits();
  Branch prefix;
  if (!detail::build_chain(h, h.support(), prefix, cert, tol)) return std::nullopt;
  return cert;
}

/// Replays a certificate against `h`: every stored operator must commute with
/// its branch Hamiltonian and every branch must end at its stored scalar.
/// Returns an error description, or nullopt when the certificate holds.
inline std::optional<std::string> check_certificate(const PauliSum& h,
                                                    const MFCertificate& cert,
                                                    const Tolerances& tol = {}) {
  if (cert.n_qubits != h.n_qubits()) return "certificate qubit count mismatch";
  std::uint64_t cert_support = 0;
  for (int q : cert.support) {
    if (q < 0 || q >= h.n_qubits()) return "certificate support out of range";
    cert_support |= std::uint64_t{1} << q;
  }
  if ((h.support() & ~cert_support) != 0) {
    return "Hamiltonian acts on qubits outside the certificate support";
  }
  std::optional<std::string> error;
  Branch prefix;
  auto walk = [&](auto&& self, const PauliSum& cur, std::uint64_t remaining) -> void {
    if (error) return;
    if (remaining == 0) {
      auto it = cert.terminal_values.find(prefix);
      if (it == cert.terminal_values.end()) {
        error = "missing terminal value";
        return;
      }
      for (const auto& [w, c] : cur) {
        if (!w.is_identity() && std::abs(c) > tol.commutator * std::max(1.0, h.norm())) {
          error = "branch does not reduce to a scalar";
          return;
        }
      }
      if (std::abs(cur.constant() - it->second) > 1e-9 * std::max(1.0, std::abs(it->second))) {
        error = "terminal value mismatch";
      }
      return;
    }
    auto it = cert.steps.find(prefix);
    if (it == cert.steps.end()) {
      error = "missing reduction step";
      return;
    }
    const ReductionStep& step = it->second;
    if (!((remaining >> step.qubit) & 1U)) {
      error = "reduction step revisits qubit " + std::to_string(step.qubit);
      return;
    }
    const PauliSum comm = commutator_over_i(cur, step.op.as_sum(cur.n_qubits()));
    if (comm.norm() > tol.commutator * std::max(1.0, cur.norm())) {
      error = "operator on qubit " + std::to_string(step.qubit) +
              " does not commute with its branch Hamiltonian";
      return;
    }
    const std::uint64_t rest = remaining & ~(std::uint64_t{1} << step.qubit);
    for (int outcome : {1, -1}) {
      prefix.push_back(outcome);
      self(self, reduce_qubit(cur, step.op, outcome, tol.prune), rest);
      prefix.pop_back();
    }
  };
  walk(walk, h, cert_support);
  return error;
}

}  // namespace mfpart

#endif  // MFPART_MEAN_FIELD_HPP
