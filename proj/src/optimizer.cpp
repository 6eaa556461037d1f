// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbmgs/optimizer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "param_json.hpp"

namespace rbmgs {

std::string to_string(SignGuardPolicy policy) {
  return policy == SignGuardPolicy::SkipUpdate ? "skip-update" : "clamp";
}

SignGuardPolicy sign_guard_policy_from_string(const std::string& name) {
  if (name == "skip-update") return SignGuardPolicy::SkipUpdate;
  if (name == "clamp") return SignGuardPolicy::Clamp;
  throw std::invalid_argument("unknown sign guard policy '" + name + "'");
}

namespace {

// Per-iteration memo of unnormalized log-probabilities and sign values,
// filled lazily (connected configurations reach outside the sampled set).
class ModelCache {
 public:
  ModelCache(const RbmParameters& p, int n)
      : p_(p),
        log_probs_(std::size_t{1} << n,
                   std::numeric_limits<double>::quiet_NaN()),
        signs_(std::size_t{1} << n,
               std::numeric_limits<double>::quiet_NaN()) {}

  double log_prob(std::uint64_t x) {
    double& slot = log_probs_[x];
    if (std::isnan(slot)) slot = unnormalized_log_prob(p_, x);
    return slot;
  }

  double sign(std::uint64_t x) {
    double& slot = signs_[x];
    if (std::isnan(slot)) slot = sign_value(p_, x);
    return slot;
  }

 private:
  const RbmParameters& p_;
  std::vector<double> log_probs_;
  std::vector<double> signs_;
};

double local_energy_cached(const PauliHamiltonian& h, ModelCache& cache,
                           std::uint64_t x, double sign_x) {
  const double log_prob_x = cache.log_prob(x);
  double energy = 0.0;
  for (const auto& [target, amplitude] : h.connected_indices(x)) {
    energy += amplitude *
              std::exp(0.5 * (cache.log_prob(target) - log_prob_x)) *
              (cache.sign(target) / sign_x);
  }
  return energy;
}

}  // namespace

double local_energy(const PauliHamiltonian& h, const RbmParameters& p,
                    const SpinConfiguration& x, double log_z) {
  (void)log_z;  // cancels in the Phi(x')/Phi(x) ratio
  const double sign_x = sign_value(p, x);
  if (std::abs(sign_x) < kSignEpsilon) {
    throw SignSingularityError(sign_x);
  }
  ModelCache cache(p, p.n());
  return local_energy_cached(h, cache, x.to_index(), sign_x);
}

EnergyGradient energy_and_gradient(const PauliHamiltonian& h,
                                   const RbmParameters& p,
                                   const SampledDistribution& dist,
                                   SignGuardPolicy guard,
                                   double clamp_epsilon) {
  const int n = p.n();
  if (h.n_qubits() != n) {
    throw std::invalid_argument("Hamiltonian and parameters disagree on n");
  }
  if (dist.probabilities.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("distribution table size does not match n");
  }

  ModelCache cache(p, n);
  const std::uint64_t dim = std::uint64_t{1} << n;

  // Exact backend: Phi ratios in the log domain from the model.
  // Sampled backends: amplitudes are sqrt of the estimated table, so
  // unobserved configurations drop out of <x|H|phi> and the energy is the
  // Rayleigh quotient of the empirical state (never below the ground
  // energy). The gradient's log-derivatives stay model-based either way.
  const bool model_amplitudes = dist.log_z.has_value();
  std::vector<double> sqrt_prob;
  if (!model_amplitudes) {
    sqrt_prob.resize(dim);
    for (std::uint64_t x = 0; x < dim; ++x) {
      sqrt_prob[x] = std::sqrt(dist.probabilities[x]);
    }
  }
  const auto table_local_energy = [&](std::uint64_t x, double sign_eff) {
    double energy = 0.0;
    for (const auto& [target, amplitude] : h.connected_indices(x)) {
      if (sqrt_prob[target] == 0.0) continue;
      energy += amplitude * (sqrt_prob[target] / sqrt_prob[x]) *
                (cache.sign(target) / sign_eff);
    }
    return energy;
  };

  EnergyGradient result;
  result.gradient = Eigen::VectorXd::Zero(p.parameter_count());
  Eigen::VectorXd mean_derivs = Eigen::VectorXd::Zero(p.parameter_count());
  Eigen::VectorXd mean_energy_derivs =
      Eigen::VectorXd::Zero(p.parameter_count());
  double total_weight = 0.0;
  double energy_sum = 0.0;

  for (std::uint64_t x = 0; x < dim; ++x) {
    const double prob = dist.probabilities[x];
    if (prob <= 0.0) continue;
    const double sign_x = cache.sign(x);
    double sign_eff = sign_x;
    if (std::abs(sign_x) < kSignEpsilon) {
      result.sign_guard_hit = true;
      if (guard == SignGuardPolicy::SkipUpdate) continue;
      sign_eff = std::copysign(clamp_epsilon, sign_x == 0.0 ? 1.0 : sign_x);
    }
    // Joint weight of Phi^2 = P(x) s(x)^2, renormalized below.
    const double weight = prob * sign_x * sign_x;
    const double e_loc = model_amplitudes
                             ? local_energy_cached(h, cache, x, sign_eff)
                             : table_local_energy(x, sign_eff);
    const SpinConfiguration config = SpinConfiguration::from_index(x, n);
    const Eigen::VectorXd derivs =
        log_derivatives_with_sign(p, config, sign_eff);
    total_weight += weight;
    energy_sum += weight * e_loc;
    mean_derivs += weight * derivs;
    mean_energy_derivs += (weight * e_loc) * derivs;
  }

  if (!(total_weight > 0.0)) {
    throw std::runtime_error(
        "joint distribution has zero mass; sign layer collapsed");
  }
  result.energy = energy_sum / total_weight;
  mean_derivs /= total_weight;
  mean_energy_derivs /= total_weight;
  result.gradient =
      2.0 * (mean_energy_derivs - result.energy * mean_derivs);
  if (guard == SignGuardPolicy::SkipUpdate && result.sign_guard_hit) {
    result.gradient.tail(n + 1).setZero();  // d block and c
  }
  return result;
}

RbmParameters step(const RbmParameters& p, const Eigen::VectorXd& gradient,
                   double learning_rate) {
  if (gradient.size() != p.parameter_count()) {
    throw std::invalid_argument("gradient length does not match parameters");
  }
  if (!gradient.allFinite()) {
    Eigen::Index bad = 0;
    for (Eigen::Index i = 0; i < gradient.size(); ++i) {
      if (!std::isfinite(gradient(i))) {
        bad = i;
        break;
      }
    }
    throw std::runtime_error("non-finite gradient entry at flat index " +
                             std::to_string(bad));
  }
  return RbmParameters::from_flat(p.n(), p.m(),
                                  p.to_flat() - learning_rate * gradient);
}

OptimizationTrajectory train(const PauliHamiltonian& h,
                             const OptimizerConfig& config,
                             const SamplerConfig& sampler_config) {
  if (!(config.learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (config.iterations < 1) {
    throw std::invalid_argument("iteration count must be at least 1");
  }
  if (!(config.init_range > 0.0)) {
    throw std::invalid_argument("init range must be positive");
  }

  const int n = h.n_qubits();
  std::mt19937_64 init_rng(config.rng_seed);
  RbmParameters p;
  if (config.warm_start) {
    p = *config.warm_start;
    if (!p.is_finite()) {
      throw std::invalid_argument("warm start contains non-finite values");
    }
    if (p.n() != n) {
      throw std::invalid_argument("warm start has " + std::to_string(p.n()) +
                                  " visible units, Hamiltonian needs " +
                                  std::to_string(n));
    }
    if (config.hidden_units >= 0 && config.hidden_units != p.m()) {
      throw std::invalid_argument("warm start hidden units disagree with "
                                  "requested hidden units");
    }
  } else {
    const int m = config.hidden_units >= 0 ? config.hidden_units : 2 * n;
    p = RbmParameters::random_uniform(n, m, config.init_range, init_rng);
  }

  std::mt19937_64 sampler_rng(sampler_config.rng_seed);
  OptimizationTrajectory trajectory;
  trajectory.records.reserve(static_cast<std::size_t>(config.iterations));
  trajectory.min_energy = std::numeric_limits<double>::infinity();

  for (int it = 0; it < config.iterations; ++it) {
    const SampledDistribution dist =
        sample_distribution(p, sampler_config, sampler_rng);
    const EnergyGradient eg = energy_and_gradient(
        h, p, dist, config.sign_guard, config.clamp_epsilon);
    if (!std::isfinite(eg.energy)) {
      throw std::runtime_error("non-finite energy estimate at iteration " +
                               std::to_string(it));
    }
    IterationRecord record;
    record.iteration = it;
    record.energy = eg.energy;
    record.grad_max_norm = eg.gradient.lpNorm<Eigen::Infinity>();
    record.k_used = dist.k_used;
    record.attempts = dist.attempts;
    record.successes = dist.successes;
    record.success_bound = std::isnan(dist.k_used)
                               ? std::numeric_limits<double>::quiet_NaN()
                               : success_lower_bound(p, dist.k_used);
    trajectory.records.push_back(record);
    if (eg.energy < trajectory.min_energy) {
      trajectory.min_energy = eg.energy;
      trajectory.argmin_iteration = it;
      trajectory.argmin_parameters = p;
    }
    p = step(p, eg.gradient, config.learning_rate);
  }
  return trajectory;
}

namespace {

using nlohmann::json;

double json_double(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN()
                     : j.get<double>();
}

json optimizer_config_to_json(const OptimizerConfig& config) {
  json j;
  j["learning_rate"] = config.learning_rate;
  j["iterations"] = config.iterations;
  j["init_range"] = config.init_range;
  j["rng_seed"] = config.rng_seed;
  j["sign_guard"] = to_string(config.sign_guard);
  j["clamp_epsilon"] = config.clamp_epsilon;
  j["hidden_units"] = config.hidden_units;
  j["warm_start"] = config.warm_start.has_value();
  return j;
}

OptimizerConfig optimizer_config_from_json(const json& j) {
  OptimizerConfig config;
  config.learning_rate = j.at("learning_rate").get<double>();
  config.iterations = j.at("iterations").get<int>();
  config.init_range = j.at("init_range").get<double>();
  config.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  config.sign_guard =
      sign_guard_policy_from_string(j.at("sign_guard").get<std::string>());
  config.clamp_epsilon = j.at("clamp_epsilon").get<double>();
  config.hidden_units = j.at("hidden_units").get<int>();
  // The warm-start parameters themselves are not echoed; the flag records
  // whether the run used one.
  return config;
}

json sampler_config_to_json(const SamplerConfig& config) {
  json j;
  j["backend"] = to_string(config.backend);
  j["shots"] = config.shots;
  if (config.fixed_k) {
    j["fixed_k"] = *config.fixed_k;
  } else {
    j["fixed_k"] = nullptr;
  }
  j["rng_seed"] = config.rng_seed;
  j["shot_method"] = to_string(config.shot_method);
  return j;
}

SamplerConfig sampler_config_from_json(const json& j) {
  SamplerConfig config;
  config.backend =
      sampler_backend_from_string(j.at("backend").get<std::string>());
  config.shots = j.at("shots").get<int>();
  if (!j.at("fixed_k").is_null()) {
    config.fixed_k = j.at("fixed_k").get<double>();
  }
  config.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  config.shot_method =
      shot_method_from_string(j.at("shot_method").get<std::string>());
  return config;
}

}  // namespace

void save_trajectory(const std::string& path,
                     const OptimizationTrajectory& trajectory,
                     const OptimizerConfig& config,
                     const SamplerConfig& sampler_config) {
  json j;
  j["optimizer"] = optimizer_config_to_json(config);
  j["sampler"] = sampler_config_to_json(sampler_config);
  j["min_energy"] = trajectory.min_energy;
  j["argmin_iteration"] = trajectory.argmin_iteration;
  j["argmin_parameters"] =
      detail::parameters_to_json(trajectory.argmin_parameters);
  json records = json::array();
  for (const auto& record : trajectory.records) {
    json r;
    r["iteration"] = record.iteration;
    r["energy"] = record.energy;
    r["grad_max_norm"] = record.grad_max_norm;
    r["k"] = std::isnan(record.k_used) ? json(nullptr) : json(record.k_used);
    r["attempts"] = record.attempts;
    r["successes"] = record.successes;
    r["success_bound"] = std::isnan(record.success_bound)
                             ? json(nullptr)
                             : json(record.success_bound);
    records.push_back(std::move(r));
  }
  j["iterations"] = std::move(records);
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write trajectory file: " + path);
  }
  out << j.dump(2) << "\n";
}

SavedTrajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trajectory file: " + path);
  }
  json j;
  in >> j;
  SavedTrajectory saved;
  saved.optimizer = optimizer_config_from_json(j.at("optimizer"));
  saved.sampler = sampler_config_from_json(j.at("sampler"));
  saved.trajectory.min_energy = json_double(j.at("min_energy"));
  saved.trajectory.argmin_iteration = j.at("argmin_iteration").get<int>();
  saved.trajectory.argmin_parameters =
      detail::parameters_from_json(j.at("argmin_parameters"));
  for (const auto& r : j.at("iterations")) {
    IterationRecord record;
    record.iteration = r.at("iteration").get<int>();
    record.energy = r.at("energy").get<double>();
    record.grad_max_norm = r.at("grad_max_norm").get<double>();
    record.k_used = json_double(r.at("k"));
    record.attempts = r.at("attempts").get<std::uint64_t>();
    record.successes = r.at("successes").get<std::uint64_t>();
    record.success_bound = json_double(r.at("success_bound"));
    saved.trajectory.records.push_back(record);
  }
  return saved;
}

void export_energy_csv(const std::string& path,
                       const OptimizationTrajectory& trajectory) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write CSV file: " + path);
  }
  out << "iteration,energy\n";
  char buffer[40];
  for (const auto& record : trajectory.records) {
    std::snprintf(buffer, sizeof buffer, "%.17g", record.energy);
    out << record.iteration << ',' << buffer << '\n';
  }
}

}  // namespace rbmgs
