// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rbmgs/circuit.hpp"
#include "rbmgs/rbm.hpp"

namespace rbmgs {

enum class SamplerBackend { Exact, CircuitAnalytic, CircuitShots };

/// How the shots backend realizes accepted samples. Multinomial runs the
/// gate path once and draws i.i.d. outcomes from the post-selected state
/// (distribution-identical to per-shot execution, and the only tractable
/// option at training scale); PerShot executes the full restart protocol
/// per sample.
enum class ShotMethod { Multinomial, PerShot };

std::string to_string(SamplerBackend backend);
SamplerBackend sampler_backend_from_string(const std::string& name);
std::string to_string(ShotMethod method);
ShotMethod shot_method_from_string(const std::string& name);

inline constexpr std::uint64_t kDefaultSeed = 1729;

struct SamplerConfig {
  SamplerBackend backend = SamplerBackend::Exact;
  int shots = 8192;               // accepted samples per call (shots backend)
  std::optional<double> fixed_k;  // empty: adaptive k from current weights
  std::uint64_t rng_seed = kDefaultSeed;
  ShotMethod shot_method = ShotMethod::Multinomial;
};

/// Probability table over visible configurations (solver index convention)
/// plus the shot bookkeeping of the run that produced it.
struct SampledDistribution {
  int n_visible = 0;
  std::vector<double> probabilities;  // size 2^n_visible, sums to 1
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  double k_used = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> log_z;  // exact backend only
};

/// k = max(sum_ij |w_ij| / 2, 1).
double adaptive_k(const RbmParameters& p);

/// exp(-2 sum_ij |w_ij| / k); with adaptive k this is at least e^-4.
double success_lower_bound(const RbmParameters& p, double k);

/// Overall acceptance probability of the k-regulated circuit, evaluated in
/// closed form with the hidden units summed out.
double analytic_success_probability(const RbmParameters& p, double k);

struct ExactJoint {
  std::vector<double> visible_probabilities;  // size 2^n
  double log_z = 0.0;
};

/// P(x) with hidden units marginalized analytically; cost 2^n * m.
ExactJoint exact_joint_distribution(const RbmParameters& p);

/// Raises a joint table to the power k and renormalizes (log-domain).
std::vector<double> power_k_normalize(const std::vector<double>& joint,
                                      double k);

/// Sums a joint table (circuit bit convention) over the hidden units and
/// reindexes the visible part into the solver convention.
std::vector<double> marginalize_to_visible(const std::vector<double>& joint,
                                           int n, int m);

SampledDistribution sample_distribution(const RbmParameters& p,
                                        const SamplerConfig& config,
                                        std::mt19937_64& rng);

/// Convenience overload seeding a fresh engine from config.rng_seed.
SampledDistribution sample_distribution(const RbmParameters& p,
                                        const SamplerConfig& config);

double empirical_success_rate(const SampledDistribution& dist);

/// 0.5 * sum_i |a_i - b_i| between two same-length probability tables.
double total_variation_distance(const std::vector<double>& a,
                                const std::vector<double>& b);

}  // namespace rbmgs
