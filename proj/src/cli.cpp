// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbmgs/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "rbmgs/optimizer.hpp"
#include "rbmgs/scan.hpp"

namespace rbmgs {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  int hidden = -1;
  int iterations = 20000;
  double learning_rate = 0.01;
  double init_range = 0.02;
  std::string sampler = "exact";
  int shots = 8192;
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> fixed_k;
  bool per_shot = false;
  std::string guard = "skip-update";
};

void add_optimizer_options(CLI::App& cmd, CommonOptions& opts) {
  cmd.add_option("--hidden", opts.hidden, "Hidden units m (default 2n)")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--iters", opts.iterations, "Gradient-descent iterations")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--lr", opts.learning_rate, "Learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--init-range", opts.init_range,
                 "Half-width of the uniform parameter init")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--guard", opts.guard, "Sign guard policy")
      ->check(CLI::IsMember({"skip-update", "clamp"}))
      ->capture_default_str();
}

void add_sampler_options(CLI::App& cmd, CommonOptions& opts) {
  cmd.add_option("--sampler", opts.sampler, "Distribution backend")
      ->check(CLI::IsMember({"exact", "circuit-analytic", "circuit-shots"}))
      ->capture_default_str();
  cmd.add_option("--shots", opts.shots,
                 "Accepted samples per iteration (circuit-shots)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--seed", opts.seed, "RNG seed")->capture_default_str();
  cmd.add_option("--k", opts.fixed_k,
                 "Fixed regulation constant (default: adaptive)")
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--per-shot", opts.per_shot,
               "Run the full per-shot restart protocol instead of the "
               "equivalent multinomial draw");
}

OptimizerConfig make_optimizer_config(const CommonOptions& opts) {
  OptimizerConfig config;
  config.learning_rate = opts.learning_rate;
  config.iterations = opts.iterations;
  config.init_range = opts.init_range;
  config.rng_seed = opts.seed;
  config.sign_guard = sign_guard_policy_from_string(opts.guard);
  config.hidden_units = opts.hidden;
  return config;
}

SamplerConfig make_sampler_config(const CommonOptions& opts) {
  SamplerConfig config;
  config.backend = sampler_backend_from_string(opts.sampler);
  config.shots = opts.shots;
  config.fixed_k = opts.fixed_k;
  // Salted so the sampler stream is independent of the init stream.
  config.rng_seed = opts.seed ^ 0x9e3779b97f4a7c15ull;
  config.shot_method =
      opts.per_shot ? ShotMethod::PerShot : ShotMethod::Multinomial;
  return config;
}

void print_value(std::ostream& out, const char* key, double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  out << key << '=' << buffer << '\n';
}

int cmd_solve(const std::string& hamiltonian_path,
              const std::string& warm_start_path, bool check_exact,
              const std::string& out_path, const std::string& csv_path,
              const std::string& dump_params_path, const CommonOptions& opts,
              std::ostream& out, std::ostream& err) {
  std::optional<PauliHamiltonian> h;
  OptimizerConfig config = make_optimizer_config(opts);
  const SamplerConfig sampler_config = make_sampler_config(opts);
  try {
    h = load_hamiltonian_file(hamiltonian_path);
    if (!warm_start_path.empty()) {
      config.warm_start = load_parameters(warm_start_path);
    }
  } catch (const std::exception& error) {
    err << "rbmgs solve: " << error.what() << '\n';
    return kExitUsage;
  }
  try {
    const OptimizationTrajectory trajectory = train(*h, config, sampler_config);
    print_value(out, "min_energy", trajectory.min_energy);
    out << "argmin_iteration=" << trajectory.argmin_iteration << '\n';
    if (check_exact) {
      const double exact = exact_ground_energy(*h);
      print_value(out, "exact_energy", exact);
      print_value(out, "gap", trajectory.min_energy - exact);
    }
    if (!out_path.empty()) {
      save_trajectory(out_path, trajectory, config, sampler_config);
    }
    if (!csv_path.empty()) {
      export_energy_csv(csv_path, trajectory);
    }
    if (!dump_params_path.empty()) {
      save_parameters(dump_params_path, trajectory.argmin_parameters);
    }
  } catch (const std::exception& error) {
    err << "rbmgs solve: " << error.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_scan(const std::string& manifest_path, const std::string& out_path,
             const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  ScanManifest manifest;
  try {
    manifest = load_scan_manifest(manifest_path);
  } catch (const std::exception& error) {
    err << "rbmgs scan: " << error.what() << '\n';
    return kExitUsage;
  }
  try {
    const auto results =
        run_scan(manifest, make_optimizer_config(opts), make_sampler_config(opts));
    if (out_path.empty()) {
      write_scan_csv(out, results);
    } else {
      std::ofstream file(out_path);
      if (!file) {
        err << "rbmgs scan: cannot write " << out_path << '\n';
        return kExitRuntime;
      }
      write_scan_csv(file, results);
      for (const auto& result : results) {
        out << result.label << ": "
            << (result.ok ? "ok" : ("failed: " + result.error)) << '\n';
      }
    }
    const bool all_ok = std::all_of(results.begin(), results.end(),
                                    [](const auto& r) { return r.ok; });
    return all_ok ? kExitOk : kExitRuntime;
  } catch (const std::exception& error) {
    err << "rbmgs scan: " << error.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_eigs(const std::string& hamiltonian_path, std::ostream& out,
             std::ostream& err) {
  try {
    const PauliHamiltonian h = load_hamiltonian_file(hamiltonian_path);
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.10f",
                  exact_ground_energy(h));
    out << buffer << '\n';
    return kExitOk;
  } catch (const ParseError& error) {
    err << "rbmgs eigs: " << error.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& error) {
    err << "rbmgs eigs: " << error.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_sample_diag(const std::string& params_path, int expect_n, int expect_m,
                    const CommonOptions& opts, std::ostream& out,
                    std::ostream& err) {
  RbmParameters p;
  try {
    p = load_parameters(params_path);
    if (expect_n >= 0 && expect_n != p.n()) {
      throw std::invalid_argument(
          "parameter file has n=" + std::to_string(p.n()) + ", requested n=" +
          std::to_string(expect_n));
    }
    if (expect_m >= 0 && expect_m != p.m()) {
      throw std::invalid_argument(
          "parameter file has m=" + std::to_string(p.m()) + ", requested m=" +
          std::to_string(expect_m));
    }
  } catch (const std::exception& error) {
    err << "rbmgs sample-diag: " << error.what() << '\n';
    return kExitUsage;
  }
  try {
    const double k = opts.fixed_k ? *opts.fixed_k : adaptive_k(p);
    out << "n=" << p.n() << '\n' << "m=" << p.m() << '\n';
    print_value(out, "k", k);
    out << "k_policy=" << (opts.fixed_k ? "fixed" : "adaptive") << '\n';
    print_value(out, "success_lower_bound", success_lower_bound(p, k));
    print_value(out, "analytic_success_prob",
                analytic_success_probability(p, k));

    SamplerConfig shots_config = make_sampler_config(opts);
    shots_config.backend = SamplerBackend::CircuitShots;
    const SampledDistribution shots = sample_distribution(p, shots_config);
    print_value(out, "empirical_success_rate", empirical_success_rate(shots));
    out << "attempts=" << shots.attempts << '\n'
        << "successes=" << shots.successes << '\n';

    if (p.n() + p.m() <= 20) {
      SamplerConfig exact_config;
      exact_config.backend = SamplerBackend::Exact;
      std::mt19937_64 rng(shots_config.rng_seed);
      const SampledDistribution exact =
          sample_distribution(p, exact_config, rng);
      SamplerConfig analytic_config = shots_config;
      analytic_config.backend = SamplerBackend::CircuitAnalytic;
      const SampledDistribution analytic =
          sample_distribution(p, analytic_config, rng);
      print_value(out, "tv_exact_analytic",
                  total_variation_distance(exact.probabilities,
                                           analytic.probabilities));
      print_value(out, "tv_exact_shots",
                  total_variation_distance(exact.probabilities,
                                           shots.probabilities));
    }
    return kExitOk;
  } catch (const std::exception& error) {
    err << "rbmgs sample-diag: " << error.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Variational ground-state solver for Pauli-string "
               "Hamiltonians with a sign-augmented RBM ansatz",
               "rbmgs"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string hamiltonian_path;
  std::string warm_start_path;
  std::string out_path;
  std::string csv_path;
  std::string dump_params_path;
  std::string manifest_path;
  std::string params_path;
  bool check_exact = false;
  int expect_n = -1;
  int expect_m = -1;

  CLI::App* solve = app.add_subcommand(
      "solve", "Minimize <H> once and report the minimum energy");
  solve->add_option("--hamiltonian", hamiltonian_path, "Hamiltonian file")
      ->required()
      ->check(CLI::ExistingFile);
  add_optimizer_options(*solve, opts);
  add_sampler_options(*solve, opts);
  solve->add_option("--warm-start", warm_start_path,
                    "Parameter file to start from")
      ->check(CLI::ExistingFile);
  solve->add_flag("--check-exact", check_exact,
                  "Also report the exact ground energy and the gap");
  solve->add_option("--out", out_path, "Trajectory JSON output path");
  solve->add_option("--csv", csv_path, "Energy CSV output path");
  solve->add_option("--dump-params", dump_params_path,
                    "Write the argmin parameters to this file");

  CLI::App* scan = app.add_subcommand(
      "scan", "Solve an ordered list of Hamiltonians, optionally with "
              "transfer learning");
  scan->add_option("--manifest", manifest_path, "Scan manifest (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  add_optimizer_options(*scan, opts);
  add_sampler_options(*scan, opts);
  scan->add_option("--out", out_path, "Results CSV path (default: stdout)");

  CLI::App* eigs = app.add_subcommand(
      "eigs", "Print the exact ground energy of a Hamiltonian");
  eigs->add_option("--hamiltonian", hamiltonian_path, "Hamiltonian file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* diag = app.add_subcommand(
      "sample-diag", "Report sampler health for a parameter file");
  diag->add_option("--params", params_path, "Parameter file")
      ->required()
      ->check(CLI::ExistingFile);
  diag->add_option("--n", expect_n, "Expected visible unit count");
  diag->add_option("--m", expect_m, "Expected hidden unit count");
  add_sampler_options(*diag, opts);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (solve->parsed()) {
    return cmd_solve(hamiltonian_path, warm_start_path, check_exact, out_path,
                     csv_path, dump_params_path, opts, out, err);
  }
  if (scan->parsed()) {
    return cmd_scan(manifest_path, out_path, opts, out, err);
  }
  if (eigs->parsed()) {
    return cmd_eigs(hamiltonian_path, out, err);
  }
  return cmd_sample_diag(params_path, expect_n, expect_m, opts, out, err);
}

}  // namespace rbmgs
