// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbmgs/scan.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

namespace rbmgs {

ScanManifest load_scan_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scan manifest: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& error) {
    throw std::runtime_error("bad scan manifest " + path + ": " +
                             error.what());
  }
  ScanManifest manifest;
  manifest.transfer = j.value("transfer", false);
  if (!j.contains("points") || !j.at("points").is_array() ||
      j.at("points").empty()) {
    throw std::runtime_error("scan manifest needs a non-empty 'points' list");
  }
  const auto base_dir = std::filesystem::path(path).parent_path();
  std::set<std::string> labels;
  for (const auto& entry : j.at("points")) {
    ScanPoint point;
    point.label = entry.at("label").get<std::string>();
    if (!labels.insert(point.label).second) {
      throw std::runtime_error("duplicate scan label '" + point.label + "'");
    }
    std::filesystem::path h_path(entry.at("hamiltonian").get<std::string>());
    if (h_path.is_relative()) h_path = base_dir / h_path;
    point.hamiltonian_path = h_path.string();
    if (!std::filesystem::exists(h_path)) {
      throw std::runtime_error("scan point '" + point.label +
                               "': no such file " + point.hamiltonian_path);
    }
    if (entry.contains("iterations")) {
      point.iterations = entry.at("iterations").get<int>();
    }
    if (entry.contains("hidden_units")) {
      point.hidden_units = entry.at("hidden_units").get<int>();
    }
    if (entry.contains("learning_rate")) {
      point.learning_rate = entry.at("learning_rate").get<double>();
    }
    if (entry.contains("rng_seed")) {
      point.rng_seed = entry.at("rng_seed").get<std::uint64_t>();
    }
    manifest.points.push_back(std::move(point));
  }
  return manifest;
}

std::vector<ScanPointResult> run_scan(const ScanManifest& manifest,
                                      const OptimizerConfig& base_config,
                                      const SamplerConfig& sampler_config) {
  if (manifest.points.empty()) {
    throw std::invalid_argument("scan manifest has no points");
  }
  std::vector<ScanPointResult> results;
  std::optional<RbmParameters> carry;
  for (std::size_t i = 0; i < manifest.points.size(); ++i) {
    const ScanPoint& point = manifest.points[i];
    ScanPointResult result;
    result.label = point.label;
    try {
      const PauliHamiltonian h = load_hamiltonian_file(point.hamiltonian_path);
      OptimizerConfig config = base_config;
      if (point.hidden_units) config.hidden_units = *point.hidden_units;
      if (point.learning_rate) config.learning_rate = *point.learning_rate;
      if (point.rng_seed) config.rng_seed = *point.rng_seed;
      if (manifest.transfer && carry) {
        config.warm_start = carry;
        config.hidden_units = -1;  // dimensions come from the warm start
        config.iterations =
            std::max(1, base_config.iterations / kTransferBudgetDivisor);
      }
      if (point.iterations) config.iterations = *point.iterations;
      result.trajectory = train(h, config, sampler_config);
      result.rbm_min_energy = result.trajectory.min_energy;
      result.exact_energy = exact_ground_energy(h);
      result.gap = result.rbm_min_energy - result.exact_energy;
      result.ok = true;
      if (manifest.transfer) {
        carry = result.trajectory.argmin_parameters;
      }
    } catch (const std::exception& error) {
      result.ok = false;
      result.error = error.what();
      // A failed point breaks the warm-start chain; the next point runs cold.
      carry.reset();
    }
    results.push_back(std::move(result));
  }
  return results;
}

void write_scan_csv(std::ostream& out,
                    const std::vector<ScanPointResult>& results) {
  out << "label,rbm_min_energy,exact_energy,gap\n";
  char buffer[40];
  for (const auto& result : results) {
    out << result.label << ',';
    if (!result.ok) {
      out << "error,error,error\n";
      continue;
    }
    std::snprintf(buffer, sizeof buffer, "%.17g", result.rbm_min_energy);
    out << buffer << ',';
    std::snprintf(buffer, sizeof buffer, "%.17g", result.exact_energy);
    out << buffer << ',';
    std::snprintf(buffer, sizeof buffer, "%.17g", result.gap);
    out << buffer << '\n';
  }
}

}  // namespace rbmgs
