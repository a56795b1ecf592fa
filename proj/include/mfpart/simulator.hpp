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

// Dense statevector backend.
//
// Amplitude index i stores |b_{n-1} ... b_1 b_0> with b_q = (i >> q) & 1.
// Term-wise routines never build the 2^n x 2^n matrix; they act with one
// Pauli word at a time via P|i> = i^{|x&z|} (-1)^{|i&z|} |i ^ x>.

#ifndef MFPART_SIMULATOR_HPP
#define MFPART_SIMULATOR_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mfpart/dense.hpp"
#include "mfpart/partition.hpp"

namespace mfpart {

/// Cap for term-wise statevector routines.
inline constexpr int kStateQubitCap = 24;

struct StateVector {
  int n_qubits = 0;
  Eigen::VectorXcd amplitudes;

  StateVector() = default;
  StateVector(int n, Eigen::VectorXcd amps) : n_qubits(n), amplitudes(std::move(amps)) {
    if (n < 0 || n > kStateQubitCap) {
      throw std::invalid_argument("StateVector: qubit count out of range");
    }
    if (amplitudes.size() != (Eigen::Index{1} << n)) {
      throw std::invalid_argument("StateVector: expected " + std::to_string(1LL << n) +
                                  " amplitudes, got " + std::to_string(amplitudes.size()));
    }
  }

  static StateVector basis(int n, std::uint64_t index) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return {n, std::move(v)};
  }

  /// Haar-like random state from complex Gaussian amplitudes.
  template <class Rng>
  static StateVector random(int n, Rng& rng) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(Eigen::Index{1} << n);
    for (auto& a : v) a = cplx(g(rng), g(rng));
    v.normalize();
    return {n, std::move(v)};
  }

  double norm() const { return amplitudes.norm(); }
  Eigen::Index dim() const { return amplitudes.size(); }
};

namespace detail {

inline void check_dims(const PauliSum& h, const StateVector& psi, const char* who) {
  if (h.n_qubits() != psi.n_qubits) {
    throw std::invalid_argument(std::string(who) + ": operator has " +
                                std::to_string(h.n_qubits()) + " qubits, state has " +
                                std::to_string(psi.n_qubits));
  }
}

inline void check_normalized(const StateVector& psi, const char* who) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument(std::string(who) + ": state is not normalized");
  }
}

// out += c P psi
inline void apply_word_add(const PauliWord& w, double c, const Eigen::VectorXcd& psi,
                           Eigen::VectorXcd& out) {
  const std::uint64_t x = w.x_mask();
  const std::uint64_t z = w.z_mask();
  const cplx base = c * Phase{static_cast<std::uint8_t>(std::popcount(x & z) & 3)}.value();
  const auto dim = static_cast<std::uint64_t>(psi.size());
  for (std::uint64_t i = 0; i < dim; ++i) {
    const double sign = (std::popcount(i & z) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(i ^ x)) += sign * base * psi(static_cast<Eigen::Index>(i));
  }
}

// <psi|P|psi>, real for Hermitian P.
inline double word_expectation(const PauliWord& w, const Eigen::VectorXcd& psi) {
  const std::uint64_t x = w.x_mask();
  const std::uint64_t z = w.z_mask();
  const cplx base = Phase{static_cast<std::uint8_t>(std::popcount(x & z) & 3)}.value();
  const auto dim = static_cast<std::uint64_t>(psi.size());
  cplx acc = 0.0;
  for (std::uint64_t i = 0; i < dim; ++i) {
    const double sign = (std::popcount(i & z) & 1) ? -1.0 : 1.0;
    acc += sign * std::conj(psi(static_cast<Eigen::Index>(i ^ x))) *
           psi(static_cast<Eigen::Index>(i));
  }
  return (base * acc).real();
}

// Applies a 2^k x 2^k matrix to the listed qubits (subset[j] -> local bit j).
inline void apply_local(const Eigen::MatrixXcd& m, const std::vector<int>& subset,
                        Eigen::VectorXcd& psi) {
  const std::size_t k = subset.size();
  const std::uint64_t local_dim = std::uint64_t{1} << k;
  std::uint64_t mask = 0;
  for (int q : subset) mask |= std::uint64_t{1} << q;
  std::vector<std::uint64_t> offset(local_dim, 0);
  for (std::uint64_t a = 0; a < local_dim; ++a) {
    for (std::size_t j = 0; j < k; ++j) {
      if ((a >> j) & 1U) offset[a] |= std::uint64_t{1} << subset[j];
    }
  }
  Eigen::VectorXcd local(static_cast<Eigen::Index>(local_dim));
  const auto dim = static_cast<std::uint64_t>(psi.size());
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (std::uint64_t a = 0; a < local_dim; ++a) {
      local(static_cast<Eigen::Index>(a)) = psi(static_cast<Eigen::Index>(base | offset[a]));
    }
    const Eigen::VectorXcd r = m * local;
    for (std::uint64_t a = 0; a < local_dim; ++a) {
      psi(static_cast<Eigen::Index>(base | offset[a])) = r(static_cast<Eigen::Index>(a));
    }
  }
}

// (I + s n.sigma) / 2 for a unit Bloch vector n.
inline Eigen::Matrix2cd bloch_projector(const std::array<double, 3>& n, int outcome) {
  Eigen::Matrix2cd p;
  const double s = outcome;
  p(0, 0) = 0.5 * (1.0 + s * n[2]);
  p(1, 1) = 0.5 * (1.0 - s * n[2]);
  p(0, 1) = 0.5 * s * cplx(n[0], -n[1]);
  p(1, 0) = 0.5 * s * cplx(n[0], n[1]);
  return p;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) with 53 random bits; independent of the standard
// library's distribution implementation.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Seed of the random stream for one shot of one fragment.
inline std::uint64_t shot_seed(std::uint64_t seed, std::uint64_t fragment, std::uint64_t shot) {
  using detail::splitmix64;
  return splitmix64(splitmix64(splitmix64(seed) ^ fragment) ^ shot);
}

/// H psi, term by term.
inline StateVector apply(const PauliSum& h, const StateVector& psi) {
  detail::check_dims(h, psi, "apply");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.dim());
  for (const auto& [w, c] : h) detail::apply_word_add(w, c, psi.amplitudes, out);
  StateVector r;
  r.n_qubits = psi.n_qubits;
  r.amplitudes = std::move(out);
  return r;
}

inline double expectation(const PauliSum& h, const StateVector& psi) {
  detail::check_dims(h, psi, "expectation");
  double e = 0.0;
  for (const auto& [w, c] : h) e += c * detail::word_expectation(w, psi.amplitudes);
  return e;
}

/// <H^2> - <H>^2 = ||H psi||^2 - <H>^2, clamped at zero.
inline double variance(const PauliSum& h, const StateVector& psi) {
  detail::check_dims(h, psi, "variance");
  const StateVector hpsi = apply(h, psi);
  const double mean = psi.amplitudes.dot(hpsi.amplitudes).real();
  return std::max(0.0, hpsi.amplitudes.squaredNorm() - mean * mean);
}

/// Re<AB> - <A><B>. Summing both orders gives the cross term of Var(A + B).
inline double covariance(const PauliSum& a, const PauliSum& b, const StateVector& psi) {
  detail::check_dims(a, psi, "covariance");
  detail::check_dims(b, psi, "covariance");
  const StateVector apsi = apply(a, psi);
  const StateVector bpsi = apply(b, psi);
  const double ea = psi.amplitudes.dot(apsi.amplitudes).real();
  const double eb = psi.amplitudes.dot(bpsi.amplitudes).real();
  return apsi.amplitudes.dot(bpsi.amplitudes).real() - ea * eb;
}

/// Sum of the part variances, ignoring every covariance.
inline double summed_variance(const std::vector<PauliSum>& parts, const StateVector& psi) {
  double total = 0.0;
  for (const auto& p : parts) total += variance(p, psi);
  return total;
}

/// <(H - omega)^2>.
inline double shifted_square_expectation(const PauliSum& h, double omega,
                                         const StateVector& psi) {
  detail::check_dims(h, psi, "shifted_square_expectation");
  StateVector r = apply(h, psi);
  r.amplitudes -= omega * psi.amplitudes;
  return r.amplitudes.squaredNorm();
}

struct GroundState {
  double energy = 0.0;
  StateVector state;
};

/// Full spectrum (ascending) and eigenvectors of the dense matrix.
inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> diagonalize(const PauliSum& h,
                                                                   int cap = kDenseQubitCap) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(to_dense(h, cap));
}

inline GroundState eigensolve(const PauliSum& h, int cap = kDenseQubitCap) {
  const auto es = diagonalize(h, cap);
  return {es.eigenvalues()(0), StateVector(h.n_qubits(), es.eigenvectors().col(0))};
}

inline std::vector<double> spectrum(const PauliSum& h, int cap = kDenseQubitCap) {
  const auto es = diagonalize(h, cap);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

struct ShotResult {
  double value = 0.0;
  Branch outcomes;
};

namespace detail {

inline void check_fragment(const MFFragment& f, const StateVector& psi) {
  if (f.certificate.n_qubits != psi.n_qubits || f.transformed.n_qubits() != psi.n_qubits) {
    throw std::invalid_argument("measure: fragment and state qubit counts differ");
  }
}

inline Eigen::VectorXcd fragment_frame(const MFFragment& f, const StateVector& psi) {
  Eigen::VectorXcd amps = psi.amplitudes;
  if (f.entangler) apply_local(f.entangler->unitary.adjoint(), f.entangler->subset, amps);
  return amps;
}

inline const ReductionStep& step_at(const MFCertificate& cert, const Branch& prefix) {
  auto it = cert.steps.find(prefix);
  if (it == cert.steps.end()) throw std::invalid_argument("measure: certificate lacks a step");
  return it->second;
}

inline double terminal_at(const MFCertificate& cert, const Branch& branch) {
  auto it = cert.terminal_values.find(branch);
  if (it == cert.terminal_values.end()) {
    throw std::invalid_argument("measure: certificate lacks a terminal value");
  }
  return it->second;
}

}  // namespace detail

/// One feedforward pass: sequential single-qubit projective measurements
/// chosen by the certificate, sampled with the given generator.
inline ShotResult measure_fragment(const MFFragment& f, const StateVector& psi,
                                   std::mt19937_64& rng) {
  detail::check_fragment(f, psi);
  detail::check_normalized(psi, "measure_fragment");
  Eigen::VectorXcd amps = detail::fragment_frame(f, psi);
  ShotResult shot;
  for (std::size_t depth = 0; depth < f.certificate.depth(); ++depth) {
    const ReductionStep& step = detail::step_at(f.certificate, shot.outcomes);
    const auto n = step.op.unit();
    Eigen::VectorXcd plus = amps;
    detail::apply_local(detail::bloch_projector(n, 1), {step.qubit}, plus);
    const double p_plus = std::clamp(plus.squaredNorm(), 0.0, 1.0);
    const int outcome = detail::uniform01(rng) < p_plus ? 1 : -1;
    if (outcome == 1) {
      amps = std::move(plus);
    } else {
      detail::apply_local(detail::bloch_projector(n, -1), {step.qubit}, amps);
    }
    const double norm = amps.norm();
    if (norm <= 0.0) throw std::logic_error("measure_fragment: collapsed onto a null branch");
    amps /= norm;
    shot.outcomes.push_back(outcome);
  }
  shot.value = detail::terminal_at(f.certificate, shot.outcomes);
  return shot;
}

inline ShotResult measure_fragment(const MFFragment& f, const StateVector& psi,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return measure_fragment(f, psi, rng);
}

struct BranchProbability {
  Branch outcomes;
  double probability = 0.0;
  double value = 0.0;
};

/// Exact probabilities of every full branch (no sampling).
inline std::vector<BranchProbability> branch_distribution(const MFFragment& f,
                                                          const StateVector& psi) {
  detail::check_fragment(f, psi);
  std::vector<BranchProbability> out;
  Branch prefix;
  auto walk = [&](auto&& self, const Eigen::VectorXcd& amps) -> void {
    if (prefix.size() == f.certificate.depth()) {
      out.push_back({prefix, amps.squaredNorm(), detail::terminal_at(f.certificate, prefix)});
      return;
    }
    const ReductionStep& step = detail::step_at(f.certificate, prefix);
    const auto n = step.op.unit();
    for (int outcome : {1, -1}) {
      Eigen::VectorXcd next = amps;
      detail::apply_local(detail::bloch_projector(n, outcome), {step.qubit}, next);
      prefix.push_back(outcome);
      self(self, next);
      prefix.pop_back();
    }
  };
  walk(walk, detail::fragment_frame(f, psi));
  return out;
}

/// Probability-weighted terminal values.
inline double branch_expectation(const MFFragment& f, const StateVector& psi) {
  double e = 0.0;
  for (const auto& b : branch_distribution(f, psi)) e += b.probability * b.value;
  return e;
}

struct FragmentEstimate {
  std::size_t shots = 0;
  double mean = 0.0;
  /// Unbiased sample variance; 0 for a single shot.
  double variance = 0.0;
  double analytic_mean = 0.0;
  double analytic_variance = 0.0;
  /// First shot, kept for reporting.
  ShotResult first_shot;
};

struct EstimatorReport {
  std::uint64_t seed = 0;
  std::vector<FragmentEstimate> fragments;
  /// Sum of fragment sample means.
  double energy = 0.0;
  /// Sum of fragment sample variances; covariances are not included.
  double summed_variance = 0.0;
  double analytic_energy = 0.0;
  double analytic_summed_variance = 0.0;
};

struct EstimatorOptions {
  std::size_t shots = 1000;
  std::uint64_t seed = 0;
  /// 0 picks hardware concurrency.
  unsigned threads = 1;
};

/// Samples every fragment independently. Shot s of fragment f draws from
/// shot_seed(seed, f, s), so the report does not depend on thread count.
inline EstimatorReport estimate_energy(const PartitionPlan& plan, const StateVector& psi,
                                       const EstimatorOptions& opt) {
  if (plan.fragments.empty()) throw std::invalid_argument("estimate_energy: empty plan");
  if (opt.shots == 0) throw std::invalid_argument("estimate_energy: shots must be >= 1");
  detail::check_normalized(psi, "estimate_energy");
  for (const auto& f : plan.fragments) detail::check_fragment(f, psi);

  const std::size_t n_frag = plan.fragments.size();
  const std::size_t total = n_frag * opt.shots;
  std::vector<double> samples(total);
  std::vector<Branch> first(n_frag);

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t job = begin; job < end; ++job) {
      const std::size_t fi = job / opt.shots;
      const std::size_t si = job % opt.shots;
      std::mt19937_64 rng(shot_seed(opt.seed, fi, si));
      ShotResult r = measure_fragment(plan.fragments[fi], psi, rng);
      samples[job] = r.value;
      if (si == 0) first[fi] = std::move(r.outcomes);
    }
  };

  unsigned threads = opt.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                      : opt.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    run(0, total);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (total + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = std::min(total, t * chunk);
      const std::size_t e = std::min(total, b + chunk);
      pool.emplace_back([&, b, e, t] {
        try {
          run(b, e);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  EstimatorReport rep;
  rep.seed = opt.seed;
  for (std::size_t fi = 0; fi < n_frag; ++fi) {
    FragmentEstimate fe;
    fe.shots = opt.shots;
    const double* s = samples.data() + fi * opt.shots;
    double sum = 0.0;
    for (std::size_t i = 0; i < opt.shots; ++i) sum += s[i];
    fe.mean = sum / static_cast<double>(opt.shots);
    if (opt.shots > 1) {
      // Shifted by the first sample, so identical samples give exactly 0.
      double d1 = 0.0;
      double d2 = 0.0;
      for (std::size_t i = 0; i < opt.shots; ++i) {
        const double d = s[i] - s[0];
        d1 += d;
        d2 += d * d;
      }
      const double n = static_cast<double>(opt.shots);
      fe.variance = std::max(0.0, (d2 - d1 * d1 / n) / (n - 1.0));
    }
    const PauliSum& h = plan.fragments[fi].hamiltonian;
    fe.analytic_mean = expectation(h, psi);
    fe.analytic_variance = variance(h, psi);
    fe.first_shot = {s[0], std::move(first[fi])};
    rep.energy += fe.mean;
    rep.summed_variance += fe.variance;
    rep.analytic_summed_variance += fe.analytic_variance;
    rep.fragments.push_back(std::move(fe));
  }
  rep.analytic_energy = expectation(plan.source, psi);
  return rep;
}

}  // namespace mfpart

#endif  // MFPART_SIMULATOR_HPP
