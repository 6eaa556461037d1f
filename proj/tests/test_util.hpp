// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

namespace rbmgs::testing {

/// Unique path under a per-process scratch directory.
inline std::string temp_path(const std::string& name) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("rbmgs_tests_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return (dir / (std::to_string(counter++) + "_" + name)).string();
}

inline std::string write_temp_file(const std::string& name,
                                   const std::string& contents) {
  const auto path = temp_path(name);
  std::ofstream out(path);
  out << contents;
  return path;
}

}  // namespace rbmgs::testing
