// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rbmgs/pauli.hpp"
#include "rbmgs/rbm.hpp"
#include "rbmgs/sampler.hpp"

namespace rbmgs {

/// What to do when a sampled configuration has |s(x)| < kSignEpsilon:
/// SkipUpdate drops the configuration and freezes the d/c blocks for the
/// iteration (preserves the variational bound); Clamp substitutes
/// sign(s) * clamp_epsilon into the 1/s terms.
enum class SignGuardPolicy { SkipUpdate, Clamp };

std::string to_string(SignGuardPolicy policy);
SignGuardPolicy sign_guard_policy_from_string(const std::string& name);

/// Warm-started scan points run with 1/divisor of the cold budget.
inline constexpr int kTransferBudgetDivisor = 40;

struct OptimizerConfig {
  double learning_rate = 0.01;
  int iterations = 20000;
  double init_range = 0.02;
  std::uint64_t rng_seed = kDefaultSeed;
  SignGuardPolicy sign_guard = SignGuardPolicy::SkipUpdate;
  double clamp_epsilon = 1e-12;
  int hidden_units = -1;  // -1: use 2 * n_qubits
  std::optional<RbmParameters> warm_start;
};

struct IterationRecord {
  int iteration = 0;
  double energy = 0.0;
  double grad_max_norm = 0.0;
  // Sampler telemetry; k and bound are NaN under the exact backend.
  double k_used = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  double success_bound = std::numeric_limits<double>::quiet_NaN();
};

struct OptimizationTrajectory {
  std::vector<IterationRecord> records;
  double min_energy = std::numeric_limits<double>::quiet_NaN();
  int argmin_iteration = -1;
  RbmParameters argmin_parameters;
};

/// E_loc(x) = sum_{x'} H_{x,x'} Phi(x')/Phi(x). The normalizer cancels in
/// the ratio, so log_z only fixes the absolute scale of Phi; evaluation is
/// done in the log domain. Throws SignSingularityError when |s(x)| is
/// below the guard.
double local_energy(const PauliHamiltonian& h, const RbmParameters& p,
                    const SpinConfiguration& x, double log_z);

struct EnergyGradient {
  double energy = 0.0;
  Eigen::VectorXd gradient;
  bool sign_guard_hit = false;
};

/// Energy and parameter gradient 2(<E_loc D> - <E_loc><D>) under weights
/// proportional to P(x) s(x)^2.
EnergyGradient energy_and_gradient(
    const PauliHamiltonian& h, const RbmParameters& p,
    const SampledDistribution& dist,
    SignGuardPolicy guard = SignGuardPolicy::SkipUpdate,
    double clamp_epsilon = kSignEpsilon);

/// Plain descent update; throws on non-finite gradient entries.
RbmParameters step(const RbmParameters& p, const Eigen::VectorXd& gradient,
                   double learning_rate);

OptimizationTrajectory train(const PauliHamiltonian& h,
                             const OptimizerConfig& config,
                             const SamplerConfig& sampler_config);

struct SavedTrajectory {
  OptimizerConfig optimizer;
  SamplerConfig sampler;
  OptimizationTrajectory trajectory;
};

void save_trajectory(const std::string& path,
                     const OptimizationTrajectory& trajectory,
                     const OptimizerConfig& config,
                     const SamplerConfig& sampler_config);
SavedTrajectory load_trajectory(const std::string& path);

/// Two-column CSV (iteration, energy) for plotting.
void export_energy_csv(const std::string& path,
                       const OptimizationTrajectory& trajectory);

}  // namespace rbmgs
