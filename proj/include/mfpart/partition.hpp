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

// Greedy mean-field partitioning.
//
// Each node of the recursion holds a sub-Hamiltonian F. A node is a leaf as
// soon as verify_mf(F) finds a reductive chain. Otherwise qubits with l = 2
// are kept (their operator is fixed for the whole node) and the unhandled
// qubit with the largest l is split:
//
//   l = 1:  F -> h' O'  |  h'' O'' + h_e
//   l = 0:  F -> h_x X  |  h_y Y  |  h_z Z + h_e
//
// Splits act linearly on the complements of one qubit, so an operator fixed
// on another qubit survives in every child. At level mf2 a two-qubit
// symmetry of the unhandled qubits is tried first; its unentangling unitary
// moves the node into a new frame and the recursion continues there.
//
// Every node also compares against its own QWC grouping (each group is
// mean-field), and mf2 against the plain split, so that
//   count(mf2) <= count(mf1) <= count(QWC)
// holds node by node.

#ifndef MFPART_PARTITION_HPP
#define MFPART_PARTITION_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfpart/entangler.hpp"
#include "mfpart/mean_field.hpp"
#include "mfpart/qwc.hpp"

namespace mfpart {

/// A summand measurable with one feedforward pass.
struct MFFragment {
  /// Fragment in the original frame; fragments of a plan sum to its source.
  PauliSum hamiltonian;
  /// U^dag hamiltonian U when an entangler is present, else == hamiltonian.
  /// The certificate certifies this operator.
  PauliSum transformed;
  MFCertificate certificate;
  std::optional<EntanglerSpec> entangler;
};

struct PartitionPlan {
  std::vector<MFFragment> fragments;
  PauliSum source;
};

enum class PartitionLevel { mf1, mf2 };

inline std::string to_string(PartitionLevel level) {
  return level == PartitionLevel::mf1 ? "mf1" : "mf2";
}

inline PartitionLevel parse_level(const std::string& s) {
  if (s == "mf1") return PartitionLevel::mf1;
  if (s == "mf2") return PartitionLevel::mf2;
  throw std::invalid_argument("unknown partition level '" + s + "'");
}

struct PartitionOptions {
  PartitionLevel level = PartitionLevel::mf1;
  /// 0 disables the entangler search even at mf2.
  int max_entangler_qubits = 2;
  /// Entangler search enumerates the outcomes of the fixed qubits.
  int max_fixed_branch_qubits = 12;
  Tolerances tolerances;
  EntanglerOptions entangler;
};

namespace detail {

struct Leaf {
  PauliSum transformed;
  MFCertificate certificate;
  std::optional<EntanglerSpec> entangler;
};

class GreedyPartitioner {
 public:
  explicit GreedyPartitioner(const PartitionOptions& opt) : opt_(opt) {}

  std::vector<Leaf> solve(const PauliSum& f, bool allow_entangler) {
    if (f.empty()) return {};
    if (auto cert = verify_mf(f, opt_.tolerances)) {
      return {Leaf{f, std::move(*cert), std::nullopt}};
    }

    std::vector<int> unhandled;
    std::vector<GramData> grams;
    std::vector<SingleQubitOp> fixed;
    for (int q : f.support_qubits()) {
      GramData g = compute_l(f, q, opt_.tolerances);
      if (g.l >= 2) {
        fixed.push_back(op_from(q, g.eigenvectors.col(0)));
      } else {
        unhandled.push_back(q);
        grams.push_back(std::move(g));
      }
    }

    std::optional<std::vector<Leaf>> best;
    auto consider = [&best](std::vector<Leaf> cand) {
      if (!best || cand.size() < best->size()) best = std::move(cand);
    };

    if (allow_entangler && unhandled.size() >= 2) {
      if (auto spec = find_entangler(f, unhandled, fixed)) {
        std::vector<Leaf> leaves = solve(apply_unitary(f, *spec, opt_.entangler.prune), false);
        for (auto& leaf : leaves) leaf.entangler = spec;
        consider(std::move(leaves));
      }
    }

    if (!unhandled.empty()) {
      std::size_t pick = 0;
      for (std::size_t i = 1; i < unhandled.size(); ++i) {
        if (grams[i].l > grams[pick].l) pick = i;
      }
      std::vector<Leaf> leaves;
      for (const PauliSum& child : split(f, grams[pick])) {
        auto sub = solve(child, allow_entangler);
        leaves.insert(leaves.end(), std::make_move_iterator(sub.begin()),
                      std::make_move_iterator(sub.end()));
      }
      consider(std::move(leaves));
    }

    if (!best || qwc_group_count(f) < best->size()) {
      std::vector<Leaf> leaves;
      for (const PauliSum& g : qwc_partition(f).groups) {
        auto cert = verify_mf(g, opt_.tolerances);
        if (!cert) throw std::logic_error("QWC group failed mean-field verification");
        leaves.push_back(Leaf{g, std::move(*cert), std::nullopt});
      }
      consider(std::move(leaves));
    }
    return std::move(*best);
  }

 private:
  std::vector<PauliSum> split(const PauliSum& f, const GramData& g) const {
    const double prune = opt_.tolerances.prune;
    if (g.l == 1) {
      const L1Factorization fac = factor_l1(f, g, opt_.tolerances);
      return {attach(fac.h1, fac.op1, prune),
              sum_add(attach(fac.h2, fac.op2, prune), fac.h_e, prune)};
    }
    const auto d = decompose_by_qubit(f, g.qubit);
    return {attach(d.h_x, SingleQubitOp::along(g.qubit, Axis::X), prune),
            attach(d.h_y, SingleQubitOp::along(g.qubit, Axis::Y), prune),
            sum_add(attach(d.h_z, SingleQubitOp::along(g.qubit, Axis::Z), prune), d.h_e,
                    prune)};
  }

  // Looks for a pair of unhandled qubits with a commuting operator whose
  // unentangler is valid on every outcome branch of the fixed qubits.
  std::optional<EntanglerSpec> find_entangler(const PauliSum& f,
                                              const std::vector<int>& unhandled,
                                              const std::vector<SingleQubitOp>& fixed) const {
    if (opt_.max_entangler_qubits < 2) return std::nullopt;
    if (static_cast<int>(fixed.size()) > opt_.max_fixed_branch_qubits) return std::nullopt;

    std::vector<PauliSum> branches{f};
    for (const SingleQubitOp& op : fixed) {
      std::vector<PauliSum> next;
      next.reserve(branches.size() * 2);
      for (const PauliSum& b : branches) {
        for (int outcome : {1, -1}) next.push_back(reduce_qubit(b, op, outcome, opt_.tolerances.prune));
      }
      branches = std::move(next);
    }

    EntanglerOptions eopt = opt_.entangler;
    eopt.max_qubits = 2;
    for (std::size_t i = 0; i < unhandled.size(); ++i) {
      for (std::size_t j = i + 1; j < unhandled.size(); ++j) {
        const std::vector<int> pair{unhandled[i], unhandled[j]};
        for (const KQubitOp& op : find_commuting_ops(f, pair, eopt)) {
          if (auto spec = common_unentangler(branches, op, eopt)) return spec;
        }
      }
    }
    return std::nullopt;
  }

  static std::optional<EntanglerSpec> common_unentangler(const std::vector<PauliSum>& branches,
                                                         const KQubitOp& op,
                                                         const EntanglerOptions& eopt) {
    std::optional<EntanglerSpec> common;
    for (const PauliSum& b : branches) {
      EntanglerSpec spec;
      try {
        if (!factorability_check(b, op, eopt).ok()) return std::nullopt;
        spec = build_unentangler(b, op, eopt);
      } catch (const std::invalid_argument&) {
        return std::nullopt;
      }
      if (!common) {
        common = std::move(spec);
      } else if ((common->unitary - spec.unitary).norm() > 1e-9) {
        return std::nullopt;
      }
    }
    return common;
  }

  PartitionOptions opt_;
};

}  // namespace detail

inline PartitionPlan greedy_partition(const PauliSum& h, const PartitionOptions& opt) {
  if (h.empty()) throw std::invalid_argument("greedy_partition: empty Hamiltonian");
  detail::GreedyPartitioner solver(opt);
  const bool entangle = opt.level == PartitionLevel::mf2 && opt.max_entangler_qubits >= 2;
  PartitionPlan plan{{}, h};
  for (auto& leaf : solver.solve(h, entangle)) {
    MFFragment frag;
    frag.hamiltonian = leaf.entangler
                           ? apply_unitary(leaf.transformed, leaf.entangler->inverse(),
                                           opt.entangler.prune)
                           : leaf.transformed;
    frag.transformed = std::move(leaf.transformed);
    frag.certificate = std::move(leaf.certificate);
    frag.entangler = std::move(leaf.entangler);
    plan.fragments.push_back(std::move(frag));
  }
  return plan;
}

inline PartitionPlan greedy_partition(const PauliSum& h, PartitionLevel level) {
  PartitionOptions opt;
  opt.level = level;
  return greedy_partition(h, opt);
}

/// Plan where each QWC group is one fragment.
inline PartitionPlan qwc_plan(const PauliSum& h, const Tolerances& tol = {}) {
  PartitionPlan plan{{}, h};
  for (const PauliSum& g : qwc_partition(h).groups) {
    auto cert = verify_mf(g, tol);
    if (!cert) throw std::logic_error("QWC group failed mean-field verification");
    plan.fragments.push_back({g, g, std::move(*cert), std::nullopt});
  }
  return plan;
}

struct PlanValidation {
  double reconstruction_error = 0.0;
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

/// Reconstruction, certificates, and entangler consistency.
inline PlanValidation validate_plan(const PartitionPlan& plan, double reconstruction_tol = 1e-9,
                                    const Tolerances& tol = {}) {
  PlanValidation v;
  PauliSum total(plan.source.n_qubits());
  for (std::size_t i = 0; i < plan.fragments.size(); ++i) {
    const MFFragment& f = plan.fragments[i];
    const std::string tag = "fragment " + std::to_string(i) + ": ";
    if (f.hamiltonian.n_qubits() != plan.source.n_qubits()) {
      v.problems.push_back(tag + "qubit count mismatch");
      continue;
    }
    total = sum_add(total, f.hamiltonian, 0.0);
    if (f.entangler) {
      try {
        const PauliSum t = apply_unitary(f.hamiltonian, *f.entangler);
        if (max_abs_difference(t, f.transformed) > 1e-8) {
          v.problems.push_back(tag + "transformed operator does not match U^dag H U");
        }
      } catch (const std::exception& e) {
        v.problems.push_back(tag + e.what());
      }
    } else if (max_abs_difference(f.hamiltonian, f.transformed) > 0.0) {
      v.problems.push_back(tag + "transformed operator differs without an entangler");
    }
    if (auto err = check_certificate(f.transformed, f.certificate, tol)) {
      v.problems.push_back(tag + *err);
    }
  }
  v.reconstruction_error = max_abs_difference(total, plan.source);
  if (v.reconstruction_error > reconstruction_tol) {
    v.problems.push_back("fragments do not sum to the source (error " +
                         std::to_string(v.reconstruction_error) + ")");
  }
  return v;
}

}  // namespace mfpart

#endif  // MFPART_PARTITION_HPP
