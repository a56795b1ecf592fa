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

// mfpart command-line tool.
//
// Exit codes: 0 success, 1 usage / input error, 2 validation failure,
// 3 verify-mf found the Hamiltonian is not mean-field.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mfpart/mfpart.hpp"

namespace {

using namespace mfpart;
using nlohmann::json;

constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNotMeanField = 3;

struct Config {
  std::string hamiltonian;
  std::string state;
  std::string plan;
  std::string output;
  std::string level = "mf1";
  std::size_t shots = 0;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  double tolerance = 1e-8;
  int max_entangler_qubits = 2;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_output(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

Tolerances tolerances(const Config& cfg) {
  Tolerances t;
  t.kernel = cfg.tolerance;
  return t;
}

PartitionOptions partition_options(const Config& cfg) {
  PartitionOptions opt;
  opt.level = parse_level(cfg.level);
  opt.max_entangler_qubits = cfg.max_entangler_qubits;
  opt.tolerances = tolerances(cfg);
  opt.entangler.nullspace = cfg.tolerance;
  return opt;
}

int cmd_info(const Config& cfg) {
  const PauliSum h = load_hamiltonian(cfg.hamiltonian);
  std::cout << "qubits: " << h.n_qubits() << "\n"
            << "terms: " << h.size() << "\n"
            << "qubit  l\n";
  json rows = json::array();
  for (int q = 0; q < h.n_qubits(); ++q) {
    const GramData g = compute_l(h, q, tolerances(cfg));
    std::cout << q << "  " << g.l << "\n";
    rows.push_back({{"qubit", q}, {"l", g.l}});
  }
  if (!cfg.output.empty()) {
    write_output(cfg.output, json{{"n_qubits", h.n_qubits()}, {"terms", h.size()}, {"l", rows}}.dump(2) + "\n");
  }
  return 0;
}

int cmd_group_qwc(const Config& cfg) {
  const PauliSum h = load_hamiltonian(cfg.hamiltonian);
  const QWCGrouping g = qwc_partition(h);
  std::cout << "groups: " << g.groups.size() << "\n";
  for (std::size_t i = 0; i < g.groups.size(); ++i) {
    std::cout << "group " << i << ": " << g.groups[i].str() << "\n";
  }
  if (!cfg.output.empty()) {
    write_output(cfg.output, serialize_plan(qwc_plan(h, tolerances(cfg)), "qwc", g.groups.size()));
  }
  return 0;
}

int cmd_partition(const Config& cfg) {
  const PauliSum h = load_hamiltonian(cfg.hamiltonian);
  const std::size_t baseline = qwc_group_count(h);
  const PartitionPlan plan = cfg.level == "qwc" ? qwc_plan(h, tolerances(cfg))
                                                : greedy_partition(h, partition_options(cfg));
  const PlanValidation v = validate_plan(plan, 1e-9, tolerances(cfg));
  if (!v.ok()) {
    for (const auto& p : v.problems) std::cerr << "validation: " << p << "\n";
    return kExitInvalid;
  }
  std::cout << "fragments: " << plan.fragments.size() << ", qwc baseline: " << baseline << "\n";
  if (!cfg.output.empty()) write_output(cfg.output, serialize_plan(plan, cfg.level, baseline));
  return 0;
}

int cmd_verify_mf(const Config& cfg) {
  const PauliSum h = load_hamiltonian(cfg.hamiltonian);
  const auto cert = verify_mf(h, tolerances(cfg));
  if (!cert) {
    std::cout << "mean-field: no\n";
    return kExitNotMeanField;
  }
  std::cout << "mean-field: yes\n";
  for (const auto& [branch, step] : cert->steps) {
    std::cout << "branch [";
    for (std::size_t i = 0; i < branch.size(); ++i) std::cout << (i ? " " : "") << (branch[i] > 0 ? "+" : "-");
    const auto& b = step.op.bloch;
    std::cout << "] qubit " << step.qubit << " op (" << fmt(b[0]) << ", " << fmt(b[1]) << ", "
              << fmt(b[2]) << ")\n";
  }
  if (!cfg.output.empty()) {
    PartitionPlan plan{{MFFragment{h, h, *cert, std::nullopt}}, h};
    write_output(cfg.output, serialize_plan(plan, "verify", qwc_group_count(h)));
  }
  return 0;
}

StateVector load_state_checked(const std::string& path) {
  LoadedState s = load_state(path);
  if (!s.warning.empty()) std::cerr << "warning: " << path << ": " << s.warning << "\n";
  return std::move(s.state);
}

int cmd_variance(const Config& cfg) {
  const PauliSum h = load_hamiltonian(cfg.hamiltonian);
  const StateVector psi = load_state_checked(cfg.state);
  if (psi.n_qubits != h.n_qubits()) throw std::invalid_argument("state and Hamiltonian qubit counts differ");
  const double e = expectation(h, psi);
  const double var = variance(h, psi);
  std::cout << "expectation: " << fmt(e) << "\n" << "variance: " << fmt(var) << "\n";
  json out{{"expectation", e}, {"variance", var}};
  if (!cfg.plan.empty()) {
    const PartitionPlan plan = load_plan(cfg.plan);
    double total = 0.0;
    json frags = json::array();
    for (std::size_t i = 0; i < plan.fragments.size(); ++i) {
      const double v = variance(plan.fragments[i].hamiltonian, psi);
      total += v;
      std::cout << "fragment " << i << " variance: " << fmt(v) << "\n";
      frags.push_back(v);
    }
    std::cout << "summed fragment variance: " << fmt(total) << "\n";
    out["fragment_variances"] = frags;
    out["summed_variance"] = total;
  }
  if (!cfg.output.empty()) write_output(cfg.output, out.dump(2) + "\n");
  return 0;
}

int cmd_measure(const Config& cfg) {
  if (!cfg.seed) throw std::invalid_argument("--seed is required when shots > 0");
  if (cfg.shots == 0) throw std::invalid_argument("--shots must be >= 1");
  const PartitionPlan plan = load_plan(cfg.plan);
  const PlanValidation v = validate_plan(plan, 1e-9, tolerances(cfg));
  if (!v.ok()) {
    for (const auto& p : v.problems) std::cerr << "validation: " << p << "\n";
    return kExitInvalid;
  }
  const StateVector psi = load_state_checked(cfg.state);
  if (psi.n_qubits != plan.source.n_qubits()) throw std::invalid_argument("plan and state qubit counts differ");
  EstimatorOptions opt;
  opt.shots = cfg.shots;
  opt.seed = *cfg.seed;
  opt.threads = cfg.threads;
  const EstimatorReport rep = estimate_energy(plan, psi, opt);

  std::cout << "fragment  shots  mean  variance  analytic_mean  analytic_variance\n";
  for (std::size_t i = 0; i < rep.fragments.size(); ++i) {
    const auto& f = rep.fragments[i];
    std::cout << i << "  " << f.shots << "  " << fmt(f.mean) << "  " << fmt(f.variance) << "  "
              << fmt(f.analytic_mean) << "  " << fmt(f.analytic_variance) << "\n";
    if (cfg.shots == 1) {
      std::cout << "  branch [";
      for (std::size_t k = 0; k < f.first_shot.outcomes.size(); ++k) {
        std::cout << (k ? " " : "") << (f.first_shot.outcomes[k] > 0 ? "+" : "-");
      }
      std::cout << "] value " << fmt(f.first_shot.value) << "\n";
    }
  }
  std::cout << "energy: " << fmt(rep.energy) << " (analytic " << fmt(rep.analytic_energy) << ")\n"
            << "summed variance: " << fmt(rep.summed_variance) << " (analytic "
            << fmt(rep.analytic_summed_variance) << ")\n";
  if (!cfg.output.empty()) write_output(cfg.output, report_to_json(rep).dump(2) + "\n");
  return 0;
}

int cmd_spectrum(const Config& cfg) {
  const PauliSum h = load_hamiltonian(cfg.hamiltonian);
  const std::vector<double> ev = spectrum(h);
  for (double e : ev) std::cout << fmt(e) << "\n";
  if (!cfg.output.empty()) write_output(cfg.output, json{{"eigenvalues", ev}}.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field partitioning of qubit Hamiltonians"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--tolerance", cfg.tolerance, "Relative kernel tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", cfg.output, "Write a JSON report to this path");
  };
  auto with_hamiltonian = [&](CLI::App* sub) {
    sub->add_option("hamiltonian", cfg.hamiltonian, "Hamiltonian file")->required();
    common(sub);
  };

  auto* info = app.add_subcommand("info", "Qubit count, term count and l(k) table");
  with_hamiltonian(info);
  auto* qwc = app.add_subcommand("group-qwc", "Qubit-wise commuting grouping");
  with_hamiltonian(qwc);
  auto* part = app.add_subcommand("partition", "Mean-field partitioning");
  with_hamiltonian(part);
  part->add_option("--level", cfg.level, "qwc, mf1 or mf2")
      ->check(CLI::IsMember({"qwc", "mf1", "mf2"}));
  part->add_option("--max-entangler-qubits", cfg.max_entangler_qubits, "0 disables entanglers")
      ->check(CLI::IsMember({0, 2}));
  auto* vmf = app.add_subcommand("verify-mf", "Check whether a Hamiltonian is mean-field");
  with_hamiltonian(vmf);
  auto* var = app.add_subcommand("variance", "Expectation and variance on a state");
  with_hamiltonian(var);
  var->add_option("--state", cfg.state, "State file")->required()->check(CLI::ExistingFile);
  var->add_option("--plan", cfg.plan, "Plan file for per-fragment variances")->check(CLI::ExistingFile);
  auto* meas = app.add_subcommand("measure", "Sample a plan with feedforward measurements");
  meas->add_option("--plan", cfg.plan, "Plan file")->required()->check(CLI::ExistingFile);
  meas->add_option("--state", cfg.state, "State file")->required()->check(CLI::ExistingFile);
  meas->add_option("--shots", cfg.shots, "Shots per fragment")->required();
  meas->add_option("--seed", cfg.seed, "Random seed");
  meas->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  common(meas);
  auto* spec = app.add_subcommand("spectrum", "Exact eigenvalues (up to 12 qubits)");
  with_hamiltonian(spec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (info->parsed()) return cmd_info(cfg);
    if (qwc->parsed()) return cmd_group_qwc(cfg);
    if (part->parsed()) return cmd_partition(cfg);
    if (vmf->parsed()) return cmd_verify_mf(cfg);
    if (var->parsed()) return cmd_variance(cfg);
    if (meas->parsed()) return cmd_measure(cfg);
    if (spec->parsed()) return cmd_spectrum(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
