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

#ifndef MFPART_PAULI_HPP
#define MFPART_PAULI_HPP

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mfpart {

/// Coefficients with magnitude at or below this are dropped by canonicalize().
inline constexpr double kPruneThreshold = 1e-12;

/// Hard limit of the two-bitmask encoding.
inline constexpr int kMaxQubits = 64;

/// Single-qubit factor of a Pauli word. Encoded as (x, z) bits: X = (1,0),
/// Y = (1,1), Z = (0,1). The enumerator values define the canonical order.
enum class Axis : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char axis_char(Axis a) { return "IXYZ"[static_cast<int>(a)]; }

/// Index into a Bloch triple (x, y, z) for a non-identity axis.
inline int bloch_index(Axis a) { return static_cast<int>(a) - 1; }

inline Axis axis_from_bloch_index(int i) { return static_cast<Axis>(i + 1); }

namespace detail {

inline void check_qubit_count(int n) {
  if (n < 0 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(n) +
                                " outside [0, 64]");
  }
}

inline std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

inline int popcount(std::uint64_t v) { return std::popcount(v); }

}  // namespace detail

/// Tensor product of single-qubit Paulis in symplectic (x-mask, z-mask) form.
class PauliWord {
 public:
  PauliWord() = default;
  explicit PauliWord(int n_qubits) : n_(n_qubits) {
    detail::check_qubit_count(n_qubits);
  }
  PauliWord(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
      : n_(n_qubits), x_(x_mask), z_(z_mask) {
    detail::check_qubit_count(n_qubits);
    if (((x_ | z_) & ~detail::low_mask(n_)) != 0) {
      throw std::invalid_argument("Pauli word has bits beyond qubit count");
    }
  }

  /// Parses "X0 Z3 Y5" (whitespace separated, zero-based). "" or "I" is the
  /// identity.
  static PauliWord from_string(int n_qubits, std::string_view text);

  int n_qubits() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  std::uint64_t support() const { return x_ | z_; }
  int weight() const { return detail::popcount(support()); }
  bool is_identity() const { return support() == 0; }
  bool acts_on(int q) const { return (support() >> q) & 1U; }

  Axis axis(int q) const {
    const bool x = (x_ >> q) & 1U;
    const bool z = (z_ >> q) & 1U;
    if (x) return z ? Axis::Y : Axis::X;
    return z ? Axis::Z : Axis::I;
  }

  PauliWord with_axis(int q, Axis a) const {
    check_index(q);
    PauliWord w = *this;
    const std::uint64_t bit = std::uint64_t{1} << q;
    w.x_ &= ~bit;
    w.z_ &= ~bit;
    if (a == Axis::X || a == Axis::Y) w.x_ |= bit;
    if (a == Axis::Z || a == Axis::Y) w.z_ |= bit;
    return w;
  }

  PauliWord without(int q) const { return with_axis(q, Axis::I); }

  /// Keeps only the factors on qubits in `mask`.
  PauliWord restricted(std::uint64_t mask) const {
    PauliWord w = *this;
    w.x_ &= mask;
    w.z_ &= mask;
    return w;
  }

  std::string str() const {
    if (is_identity()) return "I";
    std::string out;
    for (int q = 0; q < n_; ++q) {
      const Axis a = axis(q);
      if (a == Axis::I) continue;
      if (!out.empty()) out += ' ';
      out += axis_char(a);
      out += std::to_string(q);
    }
    return out;
  }

  friend bool operator==(const PauliWord& a, const PauliWord& b) {
    return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_;
  }

  /// Canonical order: qubit count, then the lowest qubit at which the words
  /// differ decides, with I < X < Y < Z.
  friend bool operator<(const PauliWord& a, const PauliWord& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    const std::uint64_t diff = (a.x_ ^ b.x_) | (a.z_ ^ b.z_);
    if (diff == 0) return false;
    const int q = std::countr_zero(diff);
    return a.axis(q) < b.axis(q);
  }

 private:
  void check_index(int q) const {
    if (q < 0 || q >= n_) {
      throw std::out_of_range("qubit index " + std::to_string(q) +
                              " out of range for " + std::to_string(n_) +
                              "-qubit word");
    }
  }

  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

inline PauliWord PauliWord::from_string(int n_qubits, std::string_view text) {
  PauliWord w(n_qubits);
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "I") continue;
    if (tok.size() < 2) throw std::invalid_argument("bad Pauli token '" + tok + "'");
    Axis a;
    switch (tok[0]) {
      case 'X': a = Axis::X; break;
      case 'Y': a = Axis::Y; break;
      case 'Z': a = Axis::Z; break;
      default: throw std::invalid_argument("bad Pauli axis in '" + tok + "'");
    }
    int q = 0;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      if (tok[i] < '0' || tok[i] > '9' || q > 1000) {
        throw std::invalid_argument("bad qubit index in '" + tok + "'");
      }
      q = q * 10 + (tok[i] - '0');
    }
    if (q >= n_qubits) {
      throw std::out_of_range("qubit index in '" + tok + "' exceeds qubit count");
    }
    if (w.acts_on(q)) {
      throw std::invalid_argument("qubit " + std::to_string(q) + " repeated");
    }
    w = w.with_axis(q, a);
  }
  return w;
}

/// i^power, an exact fourth root of unity.
struct Phase {
  std::uint8_t power = 0;

  std::complex<double> value() const {
    static constexpr std::array<std::complex<double>, 4> kTable{
        std::complex<double>{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kTable[power & 3U];
  }
  friend bool operator==(Phase a, Phase b) {
    return (a.power & 3U) == (b.power & 3U);
  }
};

namespace detail {
inline void check_same_size(int a, int b) {
  if (a != b) {
    throw std::invalid_argument("qubit-count mismatch: " + std::to_string(a) +
                                " vs " + std::to_string(b));
  }
}
}  // namespace detail

/// p * q = phase * word.
///
/// With P = i^{|x&z|} X^x Z^z, the product picks up (-1)^{|z_p & x_q|} from
/// reordering, and the result's own i^{|x&z|} normalisation is divided out.
inline std::pair<Phase, PauliWord> multiply_words(const PauliWord& p,
                                                  const PauliWord& q) {
  detail::check_same_size(p.n_qubits(), q.n_qubits());
  using detail::popcount;
  const std::uint64_t x = p.x_mask() ^ q.x_mask();
  const std::uint64_t z = p.z_mask() ^ q.z_mask();
  const int power = popcount(p.x_mask() & p.z_mask()) +
                    popcount(q.x_mask() & q.z_mask()) +
                    2 * popcount(p.z_mask() & q.x_mask()) - popcount(x & z);
  const auto phase = static_cast<std::uint8_t>(((power % 4) + 4) % 4);
  return {Phase{phase}, PauliWord(p.n_qubits(), x, z)};
}

/// True iff the words commute (even number of anticommuting sites).
inline bool commutes(const PauliWord& p, const PauliWord& q) {
  detail::check_same_size(p.n_qubits(), q.n_qubits());
  const std::uint64_t anti =
      (p.x_mask() & q.z_mask()) ^ (p.z_mask() & q.x_mask());
  return (detail::popcount(anti) & 1) == 0;
}

/// True iff the single-qubit factors commute on every qubit.
inline bool qwc_commutes(const PauliWord& p, const PauliWord& q) {
  detail::check_same_size(p.n_qubits(), q.n_qubits());
  const std::uint64_t both = p.support() & q.support();
  const std::uint64_t differ =
      (p.x_mask() ^ q.x_mask()) | (p.z_mask() ^ q.z_mask());
  return (both & differ) == 0;
}

/// Real linear combination of Pauli words, kept in canonical word order.
class PauliSum {
 public:
  using Terms = std::map<PauliWord, double>;

  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_(n_qubits) {
    detail::check_qubit_count(n_qubits);
  }
  PauliSum(int n_qubits,
           std::initializer_list<std::pair<std::string_view, double>> terms)
      : PauliSum(n_qubits) {
    for (const auto& [text, c] : terms) add(PauliWord::from_string(n_, text), c);
    canonicalize();
  }

  static PauliSum from_word(const PauliWord& w, double c = 1.0) {
    PauliSum s(w.n_qubits());
    s.add(w, c);
    return s.canonicalize();
  }

  int n_qubits() const { return n_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  double coefficient(const PauliWord& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? 0.0 : it->second;
  }

  double constant() const { return coefficient(PauliWord(n_)); }

  /// Accumulates without pruning; call canonicalize() afterwards.
  void add(const PauliWord& w, double c) {
    detail::check_same_size(n_, w.n_qubits());
    if (c == 0.0) return;
    terms_[w] += c;
  }

  PauliSum& canonicalize(double threshold = kPruneThreshold) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) <= threshold) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
    return *this;
  }

  std::uint64_t support() const {
    std::uint64_t s = 0;
    for (const auto& [w, c] : terms_) s |= w.support();
    return s;
  }

  std::vector<int> support_qubits() const {
    std::vector<int> out;
    const std::uint64_t s = support();
    for (int q = 0; q < n_; ++q) {
      if ((s >> q) & 1U) out.push_back(q);
    }
    return out;
  }

  /// sqrt(sum c^2), i.e. the normalised Frobenius norm ||H||_F / sqrt(2^n).
  double norm() const {
    double s = 0;
    for (const auto& [w, c] : terms_) s += c * c;
    return std::sqrt(s);
  }

  double max_abs_coefficient() const {
    double m = 0;
    for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  PauliSum& operator+=(const PauliSum& o) {
    detail::check_same_size(n_, o.n_);
    for (const auto& [w, c] : o.terms_) terms_[w] += c;
    return canonicalize();
  }
  PauliSum& operator-=(const PauliSum& o) {
    detail::check_same_size(n_, o.n_);
    for (const auto& [w, c] : o.terms_) terms_[w] -= c;
    return canonicalize();
  }
  PauliSum& operator*=(double s) {
    for (auto& [w, c] : terms_) c *= s;
    return canonicalize();
  }

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, double s) { return a *= s; }
  friend PauliSum operator*(double s, PauliSum a) { return a *= s; }

  friend bool operator==(const PauliSum& a, const PauliSum& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (const auto& [w, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << c;
      if (!w.is_identity()) os << ' ' << w.str();
    }
    return os.str();
  }

 private:
  int n_ = 0;
  Terms terms_;
};

inline PauliSum sum_add(const PauliSum& a, const PauliSum& b,
                        double threshold = kPruneThreshold) {
  detail::check_same_size(a.n_qubits(), b.n_qubits());
  PauliSum out = a;
  for (const auto& [w, c] : b) out.add(w, c);
  return out.canonicalize(threshold);
}

inline PauliSum sum_scale(const PauliSum& s, double factor,
                          double threshold = kPruneThreshold) {
  PauliSum out(s.n_qubits());
  for (const auto& [w, c] : s) out.add(w, c * factor);
  return out.canonicalize(threshold);
}

inline PauliSum canonicalize(PauliSum s, double threshold = kPruneThreshold) {
  return s.canonicalize(threshold);
}

/// Largest coefficient-wise difference; zero iff the sums agree exactly.
inline double max_abs_difference(const PauliSum& a, const PauliSum& b) {
  detail::check_same_size(a.n_qubits(), b.n_qubits());
  double m = 0;
  for (const auto& [w, c] : a) m = std::max(m, std::abs(c - b.coefficient(w)));
  for (const auto& [w, c] : b) {
    if (a.coefficient(w) == 0.0) m = std::max(m, std::abs(c));
  }
  return m;
}

/// [a, b] / i. For Hermitian a and b this is Hermitian with real
/// coefficients; it vanishes iff the operators commute.
inline PauliSum commutator_over_i(const PauliSum& a, const PauliSum& b,
                                  double threshold = kPruneThreshold) {
  detail::check_same_size(a.n_qubits(), b.n_qubits());
  PauliSum out(a.n_qubits());
  for (const auto& [p, cp] : a) {
    for (const auto& [q, cq] : b) {
      if (commutes(p, q)) continue;
      // Anticommuting: [p, q] = 2 p q, and p q = (+-i) w.
      const auto [phase, w] = multiply_words(p, q);
      const double im = phase.value().imag();
      out.add(w, 2.0 * cp * cq * im);
    }
  }
  return out.canonicalize(threshold);
}

/// Bloch-vector operator identity_part + a X_q + b Y_q + c Z_q.
struct SingleQubitOp {
  int qubit = 0;
  std::array<double, 3> bloch{0, 0, 1};
  double identity_part = 0.0;

  SingleQubitOp() = default;
  SingleQubitOp(int q, std::array<double, 3> v, double id = 0.0)
      : qubit(q), bloch(v), identity_part(id) {
    if (norm() <= 0.0) {
      throw std::invalid_argument("single-qubit operator needs a nonzero Bloch vector");
    }
  }

  static SingleQubitOp along(int q, Axis a) {
    std::array<double, 3> v{0, 0, 0};
    v[bloch_index(a)] = 1.0;
    return SingleQubitOp(q, v);
  }

  double norm() const {
    return std::sqrt(bloch[0] * bloch[0] + bloch[1] * bloch[1] +
                     bloch[2] * bloch[2]);
  }

  std::array<double, 3> unit() const {
    const double r = norm();
    return {bloch[0] / r, bloch[1] / r, bloch[2] / r};
  }

  std::pair<double, double> eigenvalues() const {
    return {identity_part + norm(), identity_part - norm()};
  }

  PauliSum as_sum(int n_qubits) const {
    PauliSum s(n_qubits);
    const PauliWord id(n_qubits);
    s.add(id, identity_part);
    for (int i = 0; i < 3; ++i) {
      s.add(id.with_axis(qubit, axis_from_bloch_index(i)), bloch[i]);
    }
    return s.canonicalize();
  }
};

/// h * o for an `h` that does not act on o.qubit (no phases arise).
inline PauliSum attach(const PauliSum& h, const SingleQubitOp& o,
                       double threshold = kPruneThreshold) {
  PauliSum out(h.n_qubits());
  for (const auto& [w, c] : h) {
    if (w.acts_on(o.qubit)) {
      throw std::invalid_argument("attach: complement acts on the operator's qubit");
    }
    if (o.identity_part != 0.0) out.add(w, c * o.identity_part);
    for (int i = 0; i < 3; ++i) {
      out.add(w.with_axis(o.qubit, axis_from_bloch_index(i)), c * o.bloch[i]);
    }
  }
  return out.canonicalize(threshold);
}

}  // namespace mfpart

#endif  // MFPART_PAULI_HPP
