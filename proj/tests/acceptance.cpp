// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not tuned at runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rbmgs/circuit.hpp"
#include "rbmgs/optimizer.hpp"
#include "rbmgs/scan.hpp"

using namespace rbmgs;

namespace {

struct Criterion {
  int number;
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

std::vector<Criterion> g_results;
// Exact-backend trajectories from criterion 5, reused by criterion 6.
std::vector<std::pair<double, OptimizationTrajectory>> g_exact_runs;

void run_criterion(int number, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  const auto start = std::chrono::steady_clock::now();
  bool passed = false;
  std::string detail;
  try {
    std::tie(passed, detail) = body();
  } catch (const std::exception& error) {
    passed = false;
    detail = std::string("exception: ") + error.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  g_results.push_back({number, name, passed, detail, seconds});
  std::printf("[%s] %d. %s: %s (%.1f s)\n", passed ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
}

std::string fixture(const std::string& name) {
  return std::string(RBMGS_FIXTURES_DIR) + "/" + name;
}

// --- criterion 1 -----------------------------------------------------------

std::pair<bool, std::string> gradient_correctness() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int instance = 0; instance < 50; ++instance) {
    const auto h = testing::random_even_y_hamiltonian(4, 10, rng);
    const auto p = testing::random_sign_safe_parameters(4, 8, 0.5, 0.1, rng);
    const auto dist = sample_distribution(p, SamplerConfig{});
    const auto eg = energy_and_gradient(h, p, dist);
    const auto fd =
        testing::finite_difference_gradient(testing::kron_matrix(h), p);
    const double rel =
        (eg.gradient - fd).norm() / std::max(fd.norm(), 1e-12);
    worst = std::max(worst, rel);
  }
  char detail[96];
  std::snprintf(detail, sizeof detail,
                "50/50 instances, worst relative error %.2e (tol 1e-6)",
                worst);
  return {worst <= 1e-6, detail};
}

// --- criterion 2 -----------------------------------------------------------

std::pair<bool, std::string> sampler_equivalence() {
  std::mt19937_64 rng(2002);
  double worst_analytic = 0.0;
  int shot_passes = 0;
  for (int instance = 0; instance < 20; ++instance) {
    const int n = 1 + instance % 3;
    const int m = 1 + (instance / 3) % 3;
    const auto p = RbmParameters::random_uniform(n, m, 0.5, rng);

    const auto exact = sample_distribution(p, SamplerConfig{});

    SamplerConfig analytic_config;
    analytic_config.backend = SamplerBackend::CircuitAnalytic;
    const auto analytic = sample_distribution(p, analytic_config);
    worst_analytic = std::max(
        worst_analytic, total_variation_distance(exact.probabilities,
                                                 analytic.probabilities));

    SamplerConfig shots_config;
    shots_config.backend = SamplerBackend::CircuitShots;
    shots_config.shots = 100000;
    shots_config.rng_seed = 4000 + static_cast<std::uint64_t>(instance);
    const auto sampled = sample_distribution(p, shots_config);
    if (total_variation_distance(exact.probabilities, sampled.probabilities) <=
        0.02) {
      ++shot_passes;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "analytic worst TV %.2e (tol 1e-9); shots TV<=0.02 for %d/20 "
                "seeds (need >=19)",
                worst_analytic, shot_passes);
  return {worst_analytic <= 1e-9 && shot_passes >= 19, detail};
}

// --- criterion 3 -----------------------------------------------------------

std::pair<bool, std::string> success_bound() {
  std::mt19937_64 rng(3003);
  const double floor = std::exp(-4.0);
  double worst_margin = std::numeric_limits<double>::infinity();
  int violations = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    const auto p = RbmParameters::random_uniform(4, 8, 1.0, rng);
    const double k = adaptive_k(p);
    const double probability = analytic_success_probability(p, k);
    const double bound = success_lower_bound(p, k);
    if (probability < bound - 1e-15 || probability < floor - 1e-15) {
      ++violations;
    }
    worst_margin = std::min(worst_margin, probability - bound);
  }
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "1000 draws, %d violations, smallest P-bound margin %.2e",
                violations, worst_margin);
  return {violations == 0, detail};
}

// --- criterion 4 -----------------------------------------------------------

Eigen::MatrixXcd three_qubit_matrix(
    const std::function<void(StateVector&)>& apply) {
  Eigen::MatrixXcd matrix(8, 8);
  for (Eigen::Index col = 0; col < 8; ++col) {
    StateVector state(3);
    state.amplitude(0) = 0.0;
    state.amplitude(static_cast<std::size_t>(col)) = 1.0;
    apply(state);
    for (Eigen::Index row = 0; row < 8; ++row) {
      matrix(row, col) = state.amplitude(static_cast<std::size_t>(row));
    }
  }
  return matrix;
}

std::pair<bool, std::string> gate_decomposition() {
  std::mt19937_64 rng(4004);
  std::uniform_real_distribution<double> angle(-2.0 * std::numbers::pi,
                                               2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = angle(rng);
    for (int polarity = 0; polarity < 4; ++polarity) {
      const auto direct = three_qubit_matrix([&](StateVector& s) {
        s.apply_ccry(0, 1, 2, theta, polarity);
      });
      const auto composed = three_qubit_matrix([&](StateVector& s) {
        apply_gates(s, decompose_ccry(theta, 0, 1, 2, polarity));
      });
      worst = std::max(worst, (direct - composed).cwiseAbs().maxCoeff());
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof detail,
                "100 angles x 4 polarities, max entry diff %.2e (tol 1e-12)",
                worst);
  return {worst <= 1e-12, detail};
}

// --- criteria 5 and 6 ------------------------------------------------------

std::pair<bool, std::string> end_to_end_convergence() {
  const std::vector<std::string> fixtures = {"h2_sto3g.txt",
                                             "random4_eveny.txt"};
  bool passed = true;
  std::string detail;
  for (const auto& name : fixtures) {
    const auto h = load_hamiltonian_file(fixture(name));
    const double exact = exact_ground_energy(h);

    int good_seeds = 0;
    double worst_gap = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      OptimizerConfig config;
      config.iterations = 20000;
      config.hidden_units = 8;
      config.rng_seed = seed;
      const auto trajectory = train(h, config, SamplerConfig{});
      const double gap = trajectory.min_energy - exact;
      worst_gap = std::max(worst_gap, gap);
      if (std::abs(gap) <= 1e-3) ++good_seeds;
      g_exact_runs.emplace_back(exact, trajectory);
    }

    OptimizerConfig shots_config;
    shots_config.iterations = 12000;
    shots_config.hidden_units = 8;
    shots_config.rng_seed = 1;
    SamplerConfig sampler;
    sampler.backend = SamplerBackend::CircuitShots;
    sampler.shots = 8192;
    sampler.rng_seed = 5005;
    const auto shots_run = train(h, shots_config, sampler);
    const double shots_gap = shots_run.min_energy - exact;

    char part[160];
    std::snprintf(part, sizeof part,
                  "%s[exact %d/5 seeds <=1e-3, worst %.1e; shots |gap| %.1e "
                  "(tol 5e-3)] ",
                  name.c_str(), good_seeds, worst_gap, std::abs(shots_gap));
    detail += part;
    passed = passed && good_seeds >= 4 && std::abs(shots_gap) <= 5e-3;
  }
  return {passed, detail};
}

std::pair<bool, std::string> variational_bound() {
  if (g_exact_runs.empty()) {
    return {false, "no exact-backend trajectories recorded"};
  }
  std::size_t checked = 0;
  double worst = std::numeric_limits<double>::infinity();
  bool passed = true;
  for (const auto& [exact, trajectory] : g_exact_runs) {
    for (const auto& record : trajectory.records) {
      worst = std::min(worst, record.energy - exact);
      passed = passed && record.energy >= exact - 1e-12;
      ++checked;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "%zu recorded energies, min(E - lambda_min) = %.2e (>= -1e-12)",
                checked, worst);
  return {passed, detail};
}

// --- criterion 7 -----------------------------------------------------------

std::pair<bool, std::string> transfer_learning() {
  ScanManifest manifest;
  manifest.transfer = true;
  const auto dir = std::filesystem::temp_directory_path();
  for (const double scale : {0.5, 1.0, 1.5}) {
    char name[48];
    std::snprintf(name, sizeof name, "accept_scaled_%.1f.txt", scale);
    const auto path = (dir / name).string();
    std::ofstream out(path);
    out << "qubits 1\n" << scale << " X0\n" << scale << " Z0\n";
    out.close();
    ScanPoint point;
    point.label = std::to_string(scale);
    point.hamiltonian_path = path;
    manifest.points.push_back(std::move(point));
  }

  OptimizerConfig base;
  base.iterations = 20000;  // warm points run 20000/40 = 500
  base.hidden_units = 4;
  base.rng_seed = 3;
  const auto results = run_scan(manifest, base, SamplerConfig{});

  bool passed = results.size() == 3;
  double worst_gap = 0.0;
  std::size_t warm_budget = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    passed = passed && results[i].ok && std::abs(results[i].gap) <= 2e-3;
    worst_gap = std::max(worst_gap, std::abs(results[i].gap));
    if (i > 0) warm_budget = results[i].trajectory.records.size();
  }
  passed = passed && warm_budget == 500;
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "3 points, worst |gap| %.1e (tol 2e-3), warm budget %zu "
                "iterations (cold 20000)",
                worst_gap, warm_budget);
  return {passed, detail};
}

// --- criterion 8 -----------------------------------------------------------

std::pair<bool, std::string> qubit_accounting() {
  bool passed = true;
  std::string detail;
  for (const auto [n, m] : std::vector<std::pair<int, int>>{{4, 8}, {6, 6}}) {
    const auto plan = plan_circuit(RbmParameters::zeros(n, m), 1.0);
    StateVector state(plan.total_qubits());
    const bool ok = plan.total_qubits() == n + m + 1 &&
                    state.num_qubits() == n + m + 1 &&
                    state.dim() == (std::size_t{1} << (n + m + 1));
    char part[80];
    std::snprintf(part, sizeof part, "(n=%d,m=%d): %d qubits, dim %zu; ", n, m,
                  plan.total_qubits(), state.dim());
    detail += part;
    passed = passed && ok;
  }
  return {passed, detail + "expected n+m+1"};
}

}  // namespace

int main() {
  std::printf("rbmgs acceptance suite\n");
  run_criterion(1, "gradient correctness", gradient_correctness);
  run_criterion(2, "sampler equivalence", sampler_equivalence);
  run_criterion(3, "success-probability bound", success_bound);
  run_criterion(4, "gate decomposition", gate_decomposition);
  run_criterion(5, "end-to-end variational convergence",
                end_to_end_convergence);
  run_criterion(6, "variational bound", variational_bound);
  run_criterion(7, "transfer learning", transfer_learning);
  run_criterion(8, "qubit accounting", qubit_accounting);

  int failures = 0;
  for (const auto& result : g_results) {
    if (!result.passed) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
              g_results.size());
  return failures == 0 ? 0 : 1;
}
