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

// Few-qubit symmetries and the unitaries that disentangle them.
//
// A k-qubit operator O that commutes with H shares eigenvectors with it. If
// the eigenspaces of O can be laid out as computational states of the subset
// (factorability test below), the unitary U whose columns are
// that eigenbasis turns U^dag H U into a Hamiltonian on which the subset
// qubits reduce one at a time.

#ifndef MFPART_ENTANGLER_HPP
#define MFPART_ENTANGLER_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "mfpart/dense.hpp"
#include "mfpart/pauli.hpp"

namespace mfpart {

/// Real combination of the 4^k - 1 non-identity words on `subset`.
struct KQubitOp {
  int n_qubits = 0;
  std::vector<int> subset;
  /// coefficients[i] multiplies subset_words(n, subset)[i + 1].
  std::vector<double> coefficients;

  PauliSum to_sum() const {
    const auto words = subset_words(n_qubits, subset);
    PauliSum s(n_qubits);
    for (std::size_t i = 0; i < coefficients.size(); ++i) s.add(words[i + 1], coefficients[i]);
    return s.canonicalize();
  }

  Eigen::MatrixXcd matrix() const {
    const auto words = subset_words(n_qubits, subset);
    const auto dim = Eigen::Index{1} << subset.size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
      if (coefficients[i] != 0.0) m += coefficients[i] * word_matrix_on(words[i + 1], subset);
    }
    return m;
  }

  static KQubitOp from_sum(const PauliSum& s, std::vector<int> subset) {
    KQubitOp op{s.n_qubits(), std::move(subset), {}};
    const auto words = subset_words(op.n_qubits, op.subset);
    op.coefficients.assign(words.size() - 1, 0.0);
    std::uint64_t mask = 0;
    for (int q : op.subset) mask |= std::uint64_t{1} << q;
    for (const auto& [w, c] : s) {
      if ((w.support() & ~mask) != 0) {
        throw std::invalid_argument("KQubitOp::from_sum: term outside the subset");
      }
      if (w.is_identity()) continue;
      const auto it = std::find(words.begin(), words.end(), w);
      op.coefficients[static_cast<std::size_t>(it - words.begin()) - 1] = c;
    }
    return op;
  }
};

struct SpectrumReport {
  /// Descending, with repetition.
  std::vector<double> eigenvalues;
  /// (eigenvalue, multiplicity), descending.
  std::vector<std::pair<double, int>> multiplicities;
  /// Orthonormal columns matching `eigenvalues`.
  Eigen::MatrixXcd eigenvectors;

  bool degenerate() const {
    return std::any_of(multiplicities.begin(), multiplicities.end(),
                       [](const auto& m) { return m.second > 1; });
  }
  /// Column range [first, first + count) of eigenspace `i`.
  std::pair<int, int> columns(std::size_t i) const {
    int first = 0;
    for (std::size_t j = 0; j < i; ++j) first += multiplicities[j].second;
    return {first, multiplicities[i].second};
  }
};

/// Eigen-decomposition with a canonical basis: inside each eigenspace, the
/// computational basis vectors are projected in index order and
/// Gram-Schmidt orthonormalised, so diagonal operators yield basis states.
inline SpectrumReport spectrum_report(const Eigen::MatrixXcd& m, double tol = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const Eigen::Index dim = m.rows();
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());

  SpectrumReport r;
  r.eigenvectors = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::Index col = 0;
  for (Eigen::Index hi = dim - 1; hi >= 0;) {
    Eigen::Index lo = hi;
    while (lo > 0 && es.eigenvalues()(hi) - es.eigenvalues()(lo - 1) <= tol * scale) --lo;
    const Eigen::Index count = hi - lo + 1;
    const Eigen::MatrixXcd basis = es.eigenvectors().middleCols(lo, count);
    const Eigen::MatrixXcd proj = basis * basis.adjoint();
    const double value = es.eigenvalues().segment(lo, count).mean();
    Eigen::Index found = 0;
    for (Eigen::Index j = 0; j < dim && found < count; ++j) {
      Eigen::VectorXcd u = proj.col(j);
      for (Eigen::Index p = 0; p < found; ++p) {
        const auto prev = r.eigenvectors.col(col + p);
        u -= prev * prev.dot(u);
      }
      const double nu = u.norm();
      if (nu < 1e-6) continue;
      r.eigenvectors.col(col + found) = u / nu;
      ++found;
    }
    r.multiplicities.emplace_back(value, static_cast<int>(count));
    for (Eigen::Index i = 0; i < count; ++i) r.eigenvalues.push_back(value);
    col += count;
    hi = lo - 1;
  }
  return r;
}

/// Unitary acting on `subset`; columns map computational states to the
/// eigenbasis of `origin`.
struct EntanglerSpec {
  std::vector<int> subset;
  Eigen::MatrixXcd unitary;
  KQubitOp origin;

  EntanglerSpec inverse() const { return {subset, unitary.adjoint(), origin}; }
};

enum class FactorabilityStatus { nondegenerate_ok, degenerate_ok, fails };

enum class FactorabilityRoute {
  nondegenerate,
  support_within_subset,
  vanishing_blocks,
  constant_matrix,
  none
};

struct FactorabilityVerdict {
  FactorabilityStatus status = FactorabilityStatus::fails;
  FactorabilityRoute route = FactorabilityRoute::none;
  /// Eigenspace (index into SpectrumReport::multiplicities) that decided the
  /// verdict, when one did.
  std::optional<int> eigenspace;
  /// Off-diagonal reduced-block norm of that eigenspace.
  double offdiag_norm = 0.0;
  SpectrumReport spectrum;
  /// constant_matrix route: per eigenspace, the rotation diagonalising the
  /// constant coupling matrix (identity elsewhere).
  std::map<int, Eigen::MatrixXcd> rotations;

  bool ok() const { return status != FactorabilityStatus::fails; }
};

struct EntanglerOptions {
  int max_qubits = 2;
  /// Nullspace threshold on singular values, relative to the largest.
  double nullspace = 1e-8;
  /// Reduced blocks below this norm count as vanishing.
  double block = 1e-9;
  /// Coefficients below this are dropped after conjugation.
  double prune = 1e-10;
};

namespace detail {

inline std::uint64_t subset_mask(int n_qubits, const std::vector<int>& subset,
                                 int max_qubits) {
  if (subset.empty() || static_cast<int>(subset.size()) > max_qubits) {
    throw std::invalid_argument("subset size " + std::to_string(subset.size()) +
                                " outside [1, " + std::to_string(max_qubits) + "]");
  }
  std::uint64_t mask = 0;
  for (int q : subset) {
    if (q < 0 || q >= n_qubits) throw std::out_of_range("subset qubit out of range");
    if ((mask >> q) & 1U) throw std::invalid_argument("subset repeats a qubit");
    mask |= std::uint64_t{1} << q;
  }
  return mask;
}

// Reduced row echelon form; rows are basis vectors of a subspace.
inline Eigen::MatrixXd rref(Eigen::MatrixXd a, double eps = 1e-10) {
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index pivot = row;
    for (Eigen::Index r = row + 1; r < a.rows(); ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) <= eps) continue;
    a.row(row).swap(a.row(pivot));
    a.row(row) /= a(row, col);
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r != row) a.row(r) -= a(r, col) * a.row(row);
    }
    ++row;
  }
  return a.topRows(row);
}

// Groups terms by their part outside the subset; each group becomes a dense
// 2^k matrix on the subset.
inline std::map<PauliWord, Eigen::MatrixXcd> split_by_rest(const PauliSum& h,
                                                           const std::vector<int>& subset,
                                                           std::uint64_t mask) {
  std::map<PauliWord, Eigen::MatrixXcd> out;
  const auto dim = Eigen::Index{1} << subset.size();
  for (const auto& [w, c] : h) {
    const PauliWord rest = w.restricted(~mask);
    auto it = out.find(rest);
    if (it == out.end()) it = out.emplace(rest, Eigen::MatrixXcd::Zero(dim, dim)).first;
    detail::accumulate_word(it->second, detail::gather_bits(w.x_mask(), subset),
                            detail::gather_bits(w.z_mask(), subset), c);
  }
  return out;
}

inline bool qubit_compatible(const SpectrumReport& s, std::size_t k) {
  if (k == 1) return true;
  const int first = s.multiplicities.front().second;
  if (first & (first - 1)) return false;
  return std::all_of(s.multiplicities.begin(), s.multiplicities.end(),
                     [&](const auto& m) { return m.second == first; });
}

}  // namespace detail

/// Basis of all real combinations of subset words commuting with `h`.
/// Canonical: reduced row echelon form of the nullspace, each vector then
/// normalised with its largest-magnitude coefficient positive.
inline std::vector<KQubitOp> find_commuting_ops(const PauliSum& h,
                                                const std::vector<int>& subset,
                                                const EntanglerOptions& opt = {}) {
  detail::subset_mask(h.n_qubits(), subset, opt.max_qubits);
  const auto words = subset_words(h.n_qubits(), subset);
  const auto cols = static_cast<Eigen::Index>(words.size() - 1);

  std::map<PauliWord, Eigen::Index> row_of;
  std::vector<PauliSum> constraints;
  constraints.reserve(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j) {
    constraints.push_back(
        commutator_over_i(h, PauliSum::from_word(words[static_cast<std::size_t>(j) + 1]), 0.0));
    for (const auto& [w, c] : constraints.back()) row_of.emplace(w, 0);
  }
  Eigen::Index r = 0;
  for (auto& [w, idx] : row_of) idx = r++;

  Eigen::MatrixXd nullspace;
  if (r == 0) {
    nullspace = Eigen::MatrixXd::Identity(cols, cols);
  } else {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (const auto& [w, c] : constraints[static_cast<std::size_t>(j)]) m(row_of[w], j) = c;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double tau = opt.nullspace * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > tau) ++rank;
    nullspace = svd.matrixV().rightCols(cols - rank);
  }

  std::vector<KQubitOp> out;
  if (nullspace.cols() == 0) return out;
  const Eigen::MatrixXd basis = detail::rref(nullspace.transpose());
  for (Eigen::Index i = 0; i < basis.rows(); ++i) {
    Eigen::VectorXd v = basis.row(i).transpose();
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (std::abs(v(j)) < 1e-12) v(j) = 0.0;
    }
    const double nv = v.norm();
    if (nv <= opt.nullspace) continue;
    v /= nv;
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < v.size(); ++j) {
      if (std::abs(v(j)) > std::abs(v(best)) + 1e-12) best = j;
    }
    if (v(best) < 0) v = -v;
    out.push_back({h.n_qubits(), subset, std::vector<double>(v.data(), v.data() + v.size())});
  }
  return out;
}

/// Decides whether the common eigenstates of h and o can be taken as
/// products over (subset) x (rest).
inline FactorabilityVerdict factorability_check(const PauliSum& h, const KQubitOp& o,
                                                const EntanglerOptions& opt = {}) {
  const std::uint64_t mask = detail::subset_mask(h.n_qubits(), o.subset, opt.max_qubits);
  const PauliSum osum = o.to_sum();
  if (osum.empty()) throw std::invalid_argument("factorability_check: zero operator");
  if (commutator_over_i(h, osum).norm() >
      1e-9 * std::max(1.0, h.norm() * osum.norm())) {
    throw std::invalid_argument("factorability_check: operator does not commute with h");
  }

  FactorabilityVerdict v;
  v.spectrum = spectrum_report(o.matrix());
  const auto& spec = v.spectrum;

  if ((h.support() & ~mask) == 0 && detail::qubit_compatible(spec, o.subset.size())) {
    v.status = spec.degenerate() ? FactorabilityStatus::degenerate_ok
                                 : FactorabilityStatus::nondegenerate_ok;
    v.route = FactorabilityRoute::support_within_subset;
    return v;
  }
  if (!spec.degenerate()) {
    v.status = FactorabilityStatus::nondegenerate_ok;
    v.route = FactorabilityRoute::nondegenerate;
    return v;
  }

  const auto blocks = detail::split_by_rest(h, o.subset, mask);
  std::map<int, double> offdiag;
  for (std::size_t e = 0; e < spec.multiplicities.size(); ++e) {
    const auto [first, count] = spec.columns(e);
    if (count == 1) continue;
    const Eigen::MatrixXcd phi = spec.eigenvectors.middleCols(first, count);
    double sq = 0.0;
    for (const auto& [rest, m] : blocks) {
      Eigen::MatrixXcd b = phi.adjoint() * m * phi;
      b.diagonal().setZero();
      sq += b.squaredNorm();
    }
    offdiag[static_cast<int>(e)] = std::sqrt(sq);
  }
  const bool all_vanish = std::all_of(offdiag.begin(), offdiag.end(),
                                      [&](const auto& p) { return p.second <= opt.block; });
  if (all_vanish) {
    v.status = FactorabilityStatus::degenerate_ok;
    v.route = FactorabilityRoute::vanishing_blocks;
    return v;
  }

  // Constant-matrix form: inside the eigenspace, H = 1 (x) G + K (x) Hhat for
  // one fixed Hermitian K. Equivalently the traceless parts of all reduced
  // blocks are real multiples of one matrix.
  for (const auto& [e, norm] : offdiag) {
    if (norm <= opt.block) continue;
    const auto [first, count] = spec.columns(static_cast<std::size_t>(e));
    const Eigen::MatrixXcd phi = spec.eigenvectors.middleCols(first, count);
    std::vector<Eigen::MatrixXcd> parts;
    Eigen::MatrixXcd ref;
    double ref_norm = 0.0;
    for (const auto& [rest, m] : blocks) {
      Eigen::MatrixXcd b = phi.adjoint() * m * phi;
      b -= (b.trace() / static_cast<double>(count)) *
           Eigen::MatrixXcd::Identity(count, count);
      if (b.norm() > ref_norm) {
        ref_norm = b.norm();
        ref = b;
      }
      parts.push_back(std::move(b));
    }
    bool proportional = ref_norm > 0.0;
    if (proportional) {
      ref /= ref_norm;
      for (const auto& b : parts) {
        const cplx overlap = (ref.adjoint() * b).trace();
        if ((b - overlap.real() * ref).norm() > opt.block * std::max(1.0, b.norm()) ||
            std::abs(overlap.imag()) > opt.block * std::max(1.0, b.norm())) {
          proportional = false;
          break;
        }
      }
    }
    if (!proportional) {
      v.status = FactorabilityStatus::fails;
      v.route = FactorabilityRoute::none;
      v.eigenspace = e;
      v.offdiag_norm = norm;
      v.rotations.clear();
      return v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ks(ref);
    v.rotations[e] = ks.eigenvectors().rowwise().reverse();
  }
  v.status = FactorabilityStatus::degenerate_ok;
  v.route = FactorabilityRoute::constant_matrix;
  return v;
}

/// U^dag h U re-expanded in the Pauli basis.
inline PauliSum apply_unitary(const PauliSum& h, const EntanglerSpec& spec,
                              double prune = 1e-10) {
  const std::uint64_t mask =
      detail::subset_mask(h.n_qubits(), spec.subset, static_cast<int>(spec.subset.size()));
  const auto dim = Eigen::Index{1} << spec.subset.size();
  const Eigen::MatrixXcd& u = spec.unitary;
  if (u.rows() != dim || u.cols() != dim ||
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(dim, dim)).norm() > 1e-10) {
    throw std::invalid_argument("apply_unitary: matrix is not unitary on the subset");
  }
  const auto words = subset_words(h.n_qubits(), spec.subset);
  std::vector<Eigen::MatrixXcd> mats;
  mats.reserve(words.size());
  for (const auto& w : words) mats.push_back(word_matrix_on(w, spec.subset));

  PauliSum out(h.n_qubits());
  for (const auto& [rest, m] : detail::split_by_rest(h, spec.subset, mask)) {
    const Eigen::MatrixXcd t = u.adjoint() * m * u;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const double c = (mats[i] * t).trace().real() / static_cast<double>(dim);
      if (c == 0.0) continue;
      out.add(PauliWord(h.n_qubits(), rest.x_mask() | words[i].x_mask(),
                        rest.z_mask() | words[i].z_mask()),
              c);
    }
  }
  return out.canonicalize(prune);
}

/// Unitary whose columns are the (canonical) eigenbasis of o, rotated inside
/// degenerate eigenspaces when the constant-matrix route applies.
inline EntanglerSpec build_unentangler(const PauliSum& h, const KQubitOp& o,
                                       const EntanglerOptions& opt = {}) {
  const FactorabilityVerdict v = factorability_check(h, o, opt);
  if (!v.ok()) {
    throw std::invalid_argument("build_unentangler: factorability check fails (off-diagonal "
                                "block norm " + std::to_string(v.offdiag_norm) + ")");
  }
  Eigen::MatrixXcd u = v.spectrum.eigenvectors;
  for (const auto& [e, rot] : v.rotations) {
    const auto [first, count] = v.spectrum.columns(static_cast<std::size_t>(e));
    u.middleCols(first, count) = (u.middleCols(first, count) * rot).eval();
  }
  return {o.subset, u, o};
}

/// exp(-i angle P) on the support of P.
inline EntanglerSpec pauli_exponential(const PauliWord& p, double angle) {
  std::vector<int> subset;
  for (int q = 0; q < p.n_qubits(); ++q) {
    if (p.acts_on(q)) subset.push_back(q);
  }
  if (subset.empty()) throw std::invalid_argument("pauli_exponential: identity word");
  const Eigen::MatrixXcd pm = word_matrix_on(p, subset);
  const auto dim = pm.rows();
  Eigen::MatrixXcd u = std::cos(angle) * Eigen::MatrixXcd::Identity(dim, dim) -
                       cplx(0, std::sin(angle)) * pm;
  KQubitOp origin = KQubitOp::from_sum(PauliSum::from_word(p), subset);
  return {subset, u, origin};
}

}  // namespace mfpart

#endif  // MFPART_ENTANGLER_HPP
