// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbmgs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbmgs {

std::string to_string(SamplerBackend backend) {
  switch (backend) {
    case SamplerBackend::Exact:
      return "exact";
    case SamplerBackend::CircuitAnalytic:
      return "circuit-analytic";
    case SamplerBackend::CircuitShots:
      return "circuit-shots";
  }
  return "?";
}

SamplerBackend sampler_backend_from_string(const std::string& name) {
  if (name == "exact") return SamplerBackend::Exact;
  if (name == "circuit-analytic") return SamplerBackend::CircuitAnalytic;
  if (name == "circuit-shots") return SamplerBackend::CircuitShots;
  throw std::invalid_argument("unknown sampler backend '" + name + "'");
}

std::string to_string(ShotMethod method) {
  return method == ShotMethod::Multinomial ? "multinomial" : "per-shot";
}

ShotMethod shot_method_from_string(const std::string& name) {
  if (name == "multinomial") return ShotMethod::Multinomial;
  if (name == "per-shot") return ShotMethod::PerShot;
  throw std::invalid_argument("unknown shot method '" + name + "'");
}

double adaptive_k(const RbmParameters& p) {
  return std::max(0.5 * p.w.array().abs().sum(), 1.0);
}

double success_lower_bound(const RbmParameters& p, double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("regulation constant k must be positive");
  }
  return std::exp(-2.0 * p.w.array().abs().sum() / k);
}

namespace {

// log sum_x exp(ulp(x)) over all 2^n visible configurations.
double log_partition_visible(const RbmParameters& p) {
  const std::uint64_t dim = std::uint64_t{1} << p.n();
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    logs[x] = unnormalized_log_prob(p, x);
    max_log = std::max(max_log, logs[x]);
  }
  double total = 0.0;
  for (const double value : logs) total += std::exp(value - max_log);
  return max_log + std::log(total);
}

RbmParameters scale_parameters(const RbmParameters& p, double factor) {
  RbmParameters scaled = p;
  scaled.a *= factor;
  scaled.b *= factor;
  scaled.w *= factor;
  return scaled;
}

}  // namespace

double analytic_success_probability(const RbmParameters& p, double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("regulation constant k must be positive");
  }
  // P = sum_y e^{E(y)/k} / (sum_y e^{(a.sigma + b.h)/k} e^{sum|w|/k}), with
  // both sums taken in closed form over the hidden units.
  const RbmParameters scaled = scale_parameters(p, 1.0 / k);
  double log_denominator = p.w.array().abs().sum() / k;
  for (int i = 0; i < p.n(); ++i) log_denominator += log_two_cosh(p.a(i) / k);
  for (int j = 0; j < p.m(); ++j) log_denominator += log_two_cosh(p.b(j) / k);
  return std::exp(log_partition_visible(scaled) - log_denominator);
}

ExactJoint exact_joint_distribution(const RbmParameters& p) {
  if (p.n() + p.m() > 30) {
    throw std::invalid_argument(
        "exact enumeration bound exceeded (n + m > 30)");
  }
  const std::uint64_t dim = std::uint64_t{1} << p.n();
  ExactJoint result;
  result.visible_probabilities.resize(dim);
  std::vector<double> logs(dim);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::uint64_t x = 0; x < dim; ++x) {
    logs[x] = unnormalized_log_prob(p, x);
    max_log = std::max(max_log, logs[x]);
  }
  double total = 0.0;
  for (std::uint64_t x = 0; x < dim; ++x) {
    result.visible_probabilities[x] = std::exp(logs[x] - max_log);
    total += result.visible_probabilities[x];
  }
  for (auto& prob : result.visible_probabilities) prob /= total;
  result.log_z = max_log + std::log(total);
  return result;
}

std::vector<double> power_k_normalize(const std::vector<double>& joint,
                                      double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("regulation constant k must be positive");
  }
  std::vector<double> powered(joint.size(), 0.0);
  double max_log = -std::numeric_limits<double>::infinity();
  for (const double q : joint) {
    if (q > 0.0) max_log = std::max(max_log, k * std::log(q));
  }
  if (!std::isfinite(max_log)) {
    throw std::runtime_error("power-k normalization of an all-zero table");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    if (joint[i] > 0.0) {
      powered[i] = std::exp(k * std::log(joint[i]) - max_log);
      total += powered[i];
    }
  }
  for (auto& value : powered) value /= total;
  return powered;
}

std::vector<double> marginalize_to_visible(const std::vector<double>& joint,
                                           int n, int m) {
  if (joint.size() != (std::size_t{1} << (n + m))) {
    throw std::invalid_argument("joint table size does not match n + m");
  }
  const std::uint64_t visible_mask = (std::uint64_t{1} << n) - 1;
  std::vector<double> visible(std::size_t{1} << n, 0.0);
  for (std::uint64_t y = 0; y < joint.size(); ++y) {
    // Circuit bit 1 is spin +1; solver index bit 1 is spin -1.
    const std::uint64_t x = (~y) & visible_mask;
    visible[x] += joint[y];
  }
  return visible;
}

namespace {

void validate_config(const SamplerConfig& config) {
  if (config.backend == SamplerBackend::CircuitShots && config.shots < 1) {
    throw std::invalid_argument("shot mode needs shots >= 1");
  }
  if (config.fixed_k && !(*config.fixed_k > 0.0)) {
    throw std::invalid_argument("fixed k must be positive");
  }
}

SampledDistribution sample_circuit(const RbmParameters& p,
                                   const SamplerConfig& config,
                                   std::mt19937_64& rng) {
  const int n = p.n();
  const int m = p.m();
  const double k = config.fixed_k ? *config.fixed_k : adaptive_k(p);
  const GibbsCircuitPlan plan = plan_circuit(p, k);

  SampledDistribution dist;
  dist.n_visible = n;
  dist.k_used = k;

  std::vector<double> joint;
  if (config.backend == SamplerBackend::CircuitAnalytic) {
    joint = run_analytic(plan).joint_probabilities;
  } else if (config.shot_method == ShotMethod::Multinomial) {
    const AnalyticRunResult analytic = run_analytic(plan);
    if (!(analytic.overall_success_prob > 0.0)) {
      throw std::runtime_error(
          "circuit success probability underflowed to zero; k too small");
    }
    std::vector<std::uint64_t> counts(analytic.joint_probabilities.size(), 0);
    std::discrete_distribution<std::uint64_t> draw(
        analytic.joint_probabilities.begin(),
        analytic.joint_probabilities.end());
    for (int s = 0; s < config.shots; ++s) counts[draw(rng)]++;
    // Each attempt survives all ancilla measurements with the overall
    // success probability, so failures are negative-binomial.
    std::negative_binomial_distribution<std::uint64_t> failures(
        config.shots, analytic.overall_success_prob);
    dist.successes = static_cast<std::uint64_t>(config.shots);
    dist.attempts = dist.successes + failures(rng);
    joint.assign(counts.size(), 0.0);
    for (std::size_t y = 0; y < counts.size(); ++y) {
      joint[y] = static_cast<double>(counts[y]) /
                 static_cast<double>(config.shots);
    }
  } else {
    std::vector<std::uint64_t> counts(std::size_t{1} << (n + m), 0);
    for (int s = 0; s < config.shots; ++s) {
      const ShotResult shot = run_sampling_shot(plan, rng);
      counts[shot.joint_configuration]++;
      dist.attempts += shot.restarts + 1;
    }
    dist.successes = static_cast<std::uint64_t>(config.shots);
    joint.assign(counts.size(), 0.0);
    for (std::size_t y = 0; y < counts.size(); ++y) {
      joint[y] = static_cast<double>(counts[y]) /
                 static_cast<double>(config.shots);
    }
  }

  // Eq.-(7) recovery happens on the joint table, before marginalization.
  dist.probabilities = marginalize_to_visible(power_k_normalize(joint, k), n, m);
  return dist;
}

}  // namespace

SampledDistribution sample_distribution(const RbmParameters& p,
                                        const SamplerConfig& config,
                                        std::mt19937_64& rng) {
  validate_config(config);
  if (config.backend == SamplerBackend::Exact) {
    ExactJoint exact = exact_joint_distribution(p);
    SampledDistribution dist;
    dist.n_visible = p.n();
    dist.probabilities = std::move(exact.visible_probabilities);
    dist.log_z = exact.log_z;
    return dist;
  }
  return sample_circuit(p, config, rng);
}

SampledDistribution sample_distribution(const RbmParameters& p,
                                        const SamplerConfig& config) {
  std::mt19937_64 rng(config.rng_seed);
  return sample_distribution(p, config, rng);
}

double empirical_success_rate(const SampledDistribution& dist) {
  if (dist.attempts == 0) {
    throw std::invalid_argument("success rate undefined without attempts");
  }
  return static_cast<double>(dist.successes) /
         static_cast<double>(dist.attempts);
}

double total_variation_distance(const std::vector<double>& a,
                                const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("distribution tables differ in size");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return 0.5 * total;
}

}  // namespace rbmgs
