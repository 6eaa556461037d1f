// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbmgs/optimizer.hpp"

namespace rbmgs {

struct ScanPoint {
  std::string label;
  std::string hamiltonian_path;
  // Per-point overrides of the base configs.
  std::optional<int> iterations;
  std::optional<int> hidden_units;
  std::optional<double> learning_rate;
  std::optional<std::uint64_t> rng_seed;
};

struct ScanManifest {
  bool transfer = false;
  std::vector<ScanPoint> points;
};

/// JSON manifest: {"transfer": bool, "points": [{"label", "hamiltonian",
/// optional overrides...}]}. Relative Hamiltonian paths resolve against the
/// manifest's directory. Validates non-empty points, unique labels and
/// readable paths.
ScanManifest load_scan_manifest(const std::string& path);

struct ScanPointResult {
  std::string label;
  bool ok = false;
  std::string error;
  double rbm_min_energy = 0.0;
  double exact_energy = 0.0;
  double gap = 0.0;
  OptimizationTrajectory trajectory;  // empty on failure
};

/// Solves the points in order. With transfer enabled, point i > 0 warm
/// starts from point i-1's argmin parameters and runs on the reduced
/// budget (iterations / kTransferBudgetDivisor) unless overridden.
std::vector<ScanPointResult> run_scan(const ScanManifest& manifest,
                                      const OptimizerConfig& base_config,
                                      const SamplerConfig& sampler_config);

/// CSV rows (label, rbm_min_energy, exact_energy, gap); failed points carry
/// the error message in place of numbers.
void write_scan_csv(std::ostream& out,
                    const std::vector<ScanPointResult>& results);

}  // namespace rbmgs
