// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rbmgs {

// Spin/qubit convention used throughout:
//   sigma^z_i = +1  <->  qubit i in |0>  (Z eigenvalue +1)
//   basis index bit i = 1  <->  qubit i in |1>  (sigma^z_i = -1)
// Qubit 0 is the least significant bit of a basis index.

enum class PauliAxis : std::uint8_t { X, Y, Z };

char axis_letter(PauliAxis axis);

struct PauliOperator {
  PauliAxis axis;
  int qubit;

  bool operator==(const PauliOperator&) const = default;
};

/// One weighted Pauli string. Operators are sorted by qubit index and no two
/// share a qubit; an empty operator list is the identity term.
struct PauliTerm {
  double coefficient = 0.0;
  std::vector<PauliOperator> operators;

  int y_count() const;

  bool operator==(const PauliTerm&) const = default;
};

/// Visible-layer assignment x = (sigma^z_1 ... sigma^z_n), entries +1/-1.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  explicit SpinConfiguration(std::vector<std::int8_t> values);
  static SpinConfiguration from_index(std::uint64_t index, int n);

  std::uint64_t to_index() const;
  int size() const { return static_cast<int>(values_.size()); }
  int spin(int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<std::int8_t>& values() const { return values_; }

  bool operator==(const SpinConfiguration&) const = default;

 private:
  std::vector<std::int8_t> values_;  // each +1 or -1
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Amplitudes with |a| below this are dropped when merging connected
/// configurations.
inline constexpr double kAmplitudePruneThreshold = 1e-15;

/// Weighted sum of Pauli strings over n qubits. Construction validates that
/// all qubit indices are in range and that every term has an even number of
/// Y operators, which keeps the matrix real symmetric.
class PauliHamiltonian {
 public:
  PauliHamiltonian(int n_qubits, std::vector<PauliTerm> terms);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  /// All x' with <x'|H|x> != 0 and the (real) matrix elements, merged over
  /// terms and sorted by basis index.
  std::vector<std::pair<SpinConfiguration, double>> connected_configurations(
      const SpinConfiguration& x) const;

  /// Index-space variant of connected_configurations for hot loops.
  std::vector<std::pair<std::uint64_t, double>> connected_indices(
      std::uint64_t x) const;

  /// out = H * in over the full 2^n basis (both length 2^n).
  void apply_dense(const double* in, double* out) const;

 private:
  struct CompiledTerm {
    std::uint64_t flip_mask;  // X and Y qubits
    std::uint64_t sign_mask;  // Z and Y qubits
    double base;              // coefficient * i^(#Y), real by invariant
  };

  int n_qubits_;
  std::vector<PauliTerm> terms_;
  std::vector<CompiledTerm> compiled_;
};

/// <x'|term|x> for the unique connected x'. Throws std::invalid_argument on
/// terms with an odd Y count (the element would be imaginary).
std::pair<SpinConfiguration, double> apply_term(const PauliTerm& term,
                                                const SpinConfiguration& x);

// Text format: header "qubits <n>", then one term per line,
// "<coefficient> <OP><index> ..." with the identity written "<coefficient> I".
// '#' starts a comment, blank lines are ignored.
PauliHamiltonian parse_hamiltonian(std::istream& in);
PauliHamiltonian parse_hamiltonian(const std::string& text);
PauliHamiltonian load_hamiltonian_file(const std::string& path);
std::string serialize_hamiltonian(const PauliHamiltonian& h);

/// Minimum eigenvalue of the 2^n x 2^n matrix. Dense solve for n <= 12,
/// Lanczos above; throws std::invalid_argument past n = 20.
double exact_ground_energy(const PauliHamiltonian& h);

namespace detail {
// Exposed so tests can exercise the iterative path at sizes where the dense
// solver provides a reference.
double smallest_eigenvalue_iterative(const PauliHamiltonian& h);
}  // namespace detail

}  // namespace rbmgs
