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

// Text formats.
//
// Hamiltonian files:
//
//   # comment
//   qubits: 3
//   -1.25 Z0 Z1
//   0.5 X2
//   0.1            <- identity term
//
// State files hold 2^N lines "<re> <im>" in little-endian index order.
// Plans are JSON with sorted keys.

#ifndef MFPART_IO_HPP
#define MFPART_IO_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mfpart/partition.hpp"
#include "mfpart/simulator.hpp"

namespace mfpart {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message, const std::string& source = "")
      : std::runtime_error(format(line, message, source)), line_(line), message_(message) {}

  /// 1-based; 0 for whole-file problems.
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

  ParseError in_file(const std::string& path) const { return {line_, message_, path}; }

 private:
  static std::string format(std::size_t line, const std::string& message,
                            const std::string& source) {
    std::string where = source;
    if (line > 0) where += (where.empty() ? "line " : ":") + std::to_string(line);
    return where.empty() ? message : where + ": " + message;
  }

  std::size_t line_;
  std::string message_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

inline std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return trim(hash == std::string_view::npos ? s : s.substr(0, hash));
}

// Locale-independent; rejects trailing garbage and non-finite values.
inline double parse_real(std::string_view tok, std::size_t line, const char* what) {
  std::string_view t = tok;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ParseError(line, std::string("malformed ") + what + " '" + std::string(tok) + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(line, std::string("non-finite ") + what + " '" + std::string(tok) + "'");
  }
  return v;
}

inline long parse_index(std::string_view tok, std::size_t line) {
  long v = -1;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty() || v < 0) {
    throw ParseError(line, "malformed qubit index '" + std::string(tok) + "'");
  }
  return v;
}

inline std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Parses the Hamiltonian text format. Duplicate words are summed.
inline PauliSum parse_hamiltonian(std::string_view text) {
  struct Term {
    std::size_t line;
    std::vector<std::pair<Axis, long>> factors;
    double coefficient;
  };
  std::vector<Term> terms;
  long declared = -1;
  long max_index = -1;
  const auto lines = detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::size_t line = li + 1;
    const std::string_view body = detail::strip_comment(lines[li]);
    if (body.empty()) continue;
    if (body.rfind("qubits:", 0) == 0) {
      if (declared >= 0) throw ParseError(line, "duplicate 'qubits:' header");
      if (!terms.empty()) throw ParseError(line, "'qubits:' header must precede terms");
      declared = detail::parse_index(detail::trim(body.substr(7)), line);
      if (declared < 1 || declared > kMaxQubits) {
        throw ParseError(line, "qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
      }
      continue;
    }
    const auto toks = detail::split_ws(body);
    Term t{line, {}, detail::parse_real(toks[0], line, "coefficient")};
    std::uint64_t seen = 0;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      const std::string_view tok = toks[i];
      Axis a;
      switch (tok[0]) {
        case 'X': case 'x': a = Axis::X; break;
        case 'Y': case 'y': a = Axis::Y; break;
        case 'Z': case 'z': a = Axis::Z; break;
        default: throw ParseError(line, "malformed Pauli factor '" + std::string(tok) + "'");
      }
      const long q = detail::parse_index(tok.substr(1), line);
      if (q >= kMaxQubits) throw ParseError(line, "qubit index " + std::to_string(q) + " too large");
      if (declared >= 0 && q >= declared) {
        throw ParseError(line, "qubit index " + std::to_string(q) + " >= declared qubit count " +
                                   std::to_string(declared));
      }
      if ((seen >> q) & 1U) {
        throw ParseError(line, "qubit " + std::to_string(q) + " repeated in one term");
      }
      seen |= std::uint64_t{1} << q;
      max_index = std::max(max_index, q);
      t.factors.emplace_back(a, q);
    }
    terms.push_back(std::move(t));
  }
  if (terms.empty()) throw ParseError(0, "no terms in Hamiltonian");
  const int n = declared >= 0 ? static_cast<int>(declared) : static_cast<int>(max_index + 1);
  PauliSum h(std::max(n, 1));
  for (const Term& t : terms) {
    PauliWord w(h.n_qubits());
    for (const auto& [a, q] : t.factors) w = w.with_axis(static_cast<int>(q), a);
    h.add(w, t.coefficient);
  }
  return h.canonicalize(0.0);
}

inline PauliSum load_hamiltonian(const std::string& path) {
  try {
    return parse_hamiltonian(detail::read_file(path));
  } catch (const ParseError& e) {
    throw e.in_file(path);
  }
}

/// Inverse of parse_hamiltonian; coefficients round-trip exactly.
inline std::string serialize_hamiltonian(const PauliSum& h) {
  std::string out = "qubits: " + std::to_string(h.n_qubits()) + "\n";
  for (const auto& [w, c] : h) {
    out += detail::format_real(c);
    for (int q = 0; q < w.n_qubits(); ++q) {
      const Axis a = w.axis(q);
      if (a == Axis::I) continue;
      out += ' ';
      out += axis_char(a);
      out += std::to_string(q);
    }
    out += '\n';
  }
  return out;
}

struct LoadedState {
  StateVector state;
  /// Norm before renormalization.
  double original_norm = 1.0;
  /// Set when the input norm was off by more than 1e-6.
  std::string warning;
};

inline LoadedState parse_state(std::string_view text) {
  std::vector<cplx> amps;
  const auto lines = detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string_view body = detail::strip_comment(lines[li]);
    if (body.empty()) continue;
    const auto toks = detail::split_ws(body);
    if (toks.size() != 2) throw ParseError(li + 1, "expected '<re> <im>'");
    amps.emplace_back(detail::parse_real(toks[0], li + 1, "amplitude"),
                      detail::parse_real(toks[1], li + 1, "amplitude"));
  }
  if (amps.empty()) throw ParseError(0, "no amplitudes in state");
  int n = 0;
  while ((std::size_t{1} << n) < amps.size()) ++n;
  if ((std::size_t{1} << n) != amps.size()) {
    throw ParseError(0, "amplitude count " + std::to_string(amps.size()) + " is not a power of two");
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
  LoadedState out;
  out.original_norm = v.norm();
  if (out.original_norm == 0.0) throw ParseError(0, "state has zero norm");
  if (std::abs(out.original_norm - 1.0) > 1e-6) {
    out.warning = "state norm " + detail::format_real(out.original_norm) + " renormalized to 1";
  }
  v /= out.original_norm;
  out.state = StateVector(n, std::move(v));
  return out;
}

inline LoadedState load_state(const std::string& path) {
  try {
    return parse_state(detail::read_file(path));
  } catch (const ParseError& e) {
    throw e.in_file(path);
  }
}

inline std::string serialize_state(const StateVector& psi) {
  std::string out;
  for (const cplx& a : psi.amplitudes) {
    out += detail::format_real(a.real()) + " " + detail::format_real(a.imag()) + "\n";
  }
  return out;
}

// Plans ---------------------------------------------------------------------

inline constexpr int kPlanFormatVersion = 1;

namespace detail {

using nlohmann::json;

inline json terms_to_json(const PauliSum& h) {
  json arr = json::array();
  for (const auto& [w, c] : h) arr.push_back({{"coefficient", c}, {"word", w.str()}});
  return arr;
}

inline PauliSum terms_from_json(const json& arr, int n) {
  PauliSum h(n);
  for (const auto& t : arr) {
    h.add(PauliWord::from_string(n, t.at("word").get<std::string>()), t.at("coefficient").get<double>());
  }
  return h.canonicalize(0.0);
}

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != n) throw std::runtime_error("unitary is not square");
    for (Eigen::Index c = 0; c < n; ++c) {
      const json& e = row.at(static_cast<std::size_t>(c));
      m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

inline json certificate_to_json(const MFCertificate& cert) {
  json steps = json::array();
  for (const auto& [branch, step] : cert.steps) {
    const auto& b = step.op.bloch;
    steps.push_back({{"branch", branch}, {"qubit", step.qubit}, {"op", {b[0], b[1], b[2]}}});
  }
  json terminals = json::array();
  for (const auto& [branch, value] : cert.terminal_values) {
    terminals.push_back({{"branch", branch}, {"value", value}});
  }
  return {{"support", cert.support}, {"steps", std::move(steps)}, {"terminals", std::move(terminals)}};
}

inline MFCertificate certificate_from_json(const json& j, int n) {
  MFCertificate cert;
  cert.n_qubits = n;
  cert.support = j.at("support").get<std::vector<int>>();
  for (const auto& s : j.at("steps")) {
    const auto v = s.at("op").get<std::array<double, 3>>();
    const int q = s.at("qubit").get<int>();
    if (q < 0 || q >= n) throw std::runtime_error("certificate qubit out of range");
    cert.steps[s.at("branch").get<Branch>()] = ReductionStep{q, SingleQubitOp(q, v)};
  }
  for (const auto& t : j.at("terminals")) {
    cert.terminal_values[t.at("branch").get<Branch>()] = t.at("value").get<double>();
  }
  return cert;
}

}  // namespace detail

/// JSON form of a plan. `level` is a free-form label ("qwc", "mf1", "mf2").
inline nlohmann::json plan_to_json(const PartitionPlan& plan, const std::string& level,
                                   std::size_t qwc_baseline) {
  using nlohmann::json;
  json frags = json::array();
  for (std::size_t i = 0; i < plan.fragments.size(); ++i) {
    const MFFragment& f = plan.fragments[i];
    json jf = {{"index", i},
               {"terms", detail::terms_to_json(f.hamiltonian)},
               {"certificate", detail::certificate_to_json(f.certificate)}};
    if (f.entangler) {
      jf["transformed_terms"] = detail::terms_to_json(f.transformed);
      jf["entangler"] = {{"subset", f.entangler->subset},
                         {"unitary", detail::matrix_to_json(f.entangler->unitary)},
                         {"origin", detail::terms_to_json(f.entangler->origin.to_sum())}};
    } else {
      jf["entangler"] = nullptr;
    }
    frags.push_back(std::move(jf));
  }
  return {{"format", "mfpart-plan"},
          {"version", kPlanFormatVersion},
          {"level", level},
          {"n_qubits", plan.source.n_qubits()},
          {"source", detail::terms_to_json(plan.source)},
          {"fragment_count", plan.fragments.size()},
          {"qwc_baseline", qwc_baseline},
          {"fragments", std::move(frags)}};
}

inline std::string serialize_plan(const PartitionPlan& plan, const std::string& level,
                                  std::size_t qwc_baseline) {
  return plan_to_json(plan, level, qwc_baseline).dump(2) + "\n";
}

inline std::string serialize_plan(const PartitionPlan& plan, const std::string& level = "mf") {
  return serialize_plan(plan, level, qwc_group_count(plan.source));
}

/// Rebuilds a plan from serialize_plan output. Fragment sums are exact
/// since coefficients are written with round-trip precision.
inline PartitionPlan parse_plan(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("invalid plan JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "mfpart-plan") throw std::runtime_error("not a plan file");
    if (j.at("version").get<int>() != kPlanFormatVersion) throw std::runtime_error("unsupported plan version");
    const int n = j.at("n_qubits").get<int>();
    detail::check_qubit_count(n);
    PartitionPlan plan{{}, detail::terms_from_json(j.at("source"), n)};
    for (const auto& jf : j.at("fragments")) {
      MFFragment f;
      f.hamiltonian = detail::terms_from_json(jf.at("terms"), n);
      f.certificate = detail::certificate_from_json(jf.at("certificate"), n);
      if (!jf.at("entangler").is_null()) {
        const json& je = jf.at("entangler");
        EntanglerSpec spec;
        spec.subset = je.at("subset").get<std::vector<int>>();
        spec.unitary = detail::matrix_from_json(je.at("unitary"));
        spec.origin = KQubitOp::from_sum(detail::terms_from_json(je.at("origin"), n), spec.subset);
        f.transformed = detail::terms_from_json(jf.at("transformed_terms"), n);
        f.entangler = std::move(spec);
      } else {
        f.transformed = f.hamiltonian;
      }
      plan.fragments.push_back(std::move(f));
    }
    if (j.at("fragment_count").get<std::size_t>() != plan.fragments.size()) {
      throw std::runtime_error("fragment_count does not match fragment list");
    }
    return plan;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(0, std::string("invalid plan: ") + e.what());
  }
}

inline PartitionPlan load_plan(const std::string& path) {
  try {
    return parse_plan(detail::read_file(path));
  } catch (const ParseError& e) {
    throw e.in_file(path);
  }
}

inline nlohmann::json report_to_json(const EstimatorReport& rep) {
  using nlohmann::json;
  json frags = json::array();
  for (std::size_t i = 0; i < rep.fragments.size(); ++i) {
    const FragmentEstimate& f = rep.fragments[i];
    frags.push_back({{"index", i},
                     {"shots", f.shots},
                     {"mean", f.mean},
                     {"variance", f.variance},
                     {"analytic_mean", f.analytic_mean},
                     {"analytic_variance", f.analytic_variance},
                     {"first_shot", {{"outcomes", f.first_shot.outcomes}, {"value", f.first_shot.value}}}});
  }
  return {{"seed", rep.seed},
          {"energy", rep.energy},
          {"summed_variance", rep.summed_variance},
          {"analytic_energy", rep.analytic_energy},
          {"analytic_summed_variance", rep.analytic_summed_variance},
          {"fragments", std::move(frags)}};
}

}  // namespace mfpart

#endif  // MFPART_IO_HPP
