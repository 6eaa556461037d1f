// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "rbmgs/rbm.hpp"

namespace rbmgs {

// Register layout for the distribution-preparation circuit:
//   qubit i in [0, n)        visible unit sigma_i
//   qubit n + j, j in [0, m) hidden unit h_j
//   qubit n + m              reusable scratchpad ancilla
// Circuit bit convention: |1> carries the e^{+bias/k} Gibbs weight, i.e.
// bit 1 <-> spin +1. This is the opposite of the solver basis-index
// convention in pauli.hpp; the sampler converts when marginalizing.

class StateVector {
 public:
  explicit StateVector(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::complex<double> amplitude(std::size_t index) const {
    return amplitudes_[index];
  }
  std::complex<double>& amplitude(std::size_t index) {
    return amplitudes_[index];
  }

  void reset_to_zero_state();
  double norm() const;
  std::vector<double> probabilities() const;

  void apply_ry(int qubit, double angle);
  void apply_x(int qubit);
  void apply_cnot(int control, int target);
  void apply_cry(int control, int target, double angle);
  /// Two-controlled R_y; polarity bits (b1 b0) select the control subspace:
  /// the rotation fires when control1 is |b1> and control2 is |b0>.
  void apply_ccry(int control1, int control2, int target, double angle,
                  int polarity);

 private:
  void check_qubit(int qubit) const;

  int num_qubits_;
  std::vector<std::complex<double>> amplitudes_;
};

/// Rotation angles for one parameter set at regulation k.
struct GibbsCircuitPlan {
  double k = 1.0;
  Eigen::VectorXd visible_angles;   // theta_i = 2 asin(sqrt(e^{a_i/k}/(e^{a_i/k}+e^{-a_i/k})))
  Eigen::VectorXd hidden_angles;    // gamma_j, same with b_j
  Eigen::MatrixXd equal_angles;     // theta_{ij,1}: pair bits equal
  Eigen::MatrixXd unequal_angles;   // theta_{ij,2}: pair bits unequal

  int n() const { return static_cast<int>(visible_angles.size()); }
  int m() const { return static_cast<int>(hidden_angles.size()); }
  int total_qubits() const { return n() + m() + 1; }
};

GibbsCircuitPlan plan_circuit(const RbmParameters& p, double k);

/// Minimal gate record used for the C^2(R_y) decomposition output.
struct Gate {
  enum class Kind { Ry, X, Cnot, CRy };
  Kind kind;
  int q0;        // Ry/X target, Cnot/CRy control
  int q1;        // Cnot/CRy target
  double angle;  // Ry/CRy only
};

/// Standard 5-gate decomposition {C-V, CNOT, C-V+, CNOT, C-V} with
/// V = R_y(angle/2), wrapped in X gates for non-|11> polarities.
std::vector<Gate> decompose_ccry(double angle, int control1, int control2,
                                 int target, int polarity);

void apply_gates(StateVector& state, const std::vector<Gate>& gates);

/// The four projector-controlled rotations of one (sigma_i, h_j) pair:
/// R_y(theta_equal) on the ancilla when the pair bits agree, and
/// R_y(theta_unequal) when they differ. `decomposed` routes each
/// two-controlled rotation through its 5-gate decomposition.
void apply_controlled_pair_rotation(StateVector& state, int qubit_i,
                                    int qubit_j, int ancilla,
                                    double theta_equal, double theta_unequal,
                                    bool decomposed = false);

struct MeasurementOutcome {
  double success_prob = 0.0;
  bool accepted = false;
};

/// Post-selects the ancilla on |1>, renormalizes and resets it to |0> for
/// reuse. Throws std::runtime_error when the |1> branch has zero norm.
MeasurementOutcome measure_ancilla_postselect(StateVector& state, int ancilla);

/// Samples the ancilla measurement. On |1> the state collapses as in
/// measure_ancilla_postselect; on |0> the state is left untouched and the
/// caller restarts the shot.
MeasurementOutcome measure_ancilla_shot(StateVector& state, int ancilla,
                                        std::mt19937_64& rng);

struct AnalyticRunResult {
  /// Post-selected joint distribution over the first n+m qubits (circuit
  /// bit convention); equals Q(y) exactly.
  std::vector<double> joint_probabilities;
  std::vector<double> step_success_probs;  // one entry per (i, j) pair
  double overall_success_prob = 1.0;       // product of the step entries
};

AnalyticRunResult run_analytic(const GibbsCircuitPlan& plan,
                               bool decomposed = false);

struct ShotResult {
  std::uint64_t joint_configuration = 0;  // n+m circuit bits
  std::uint64_t restarts = 0;
};

/// One accepted shot of the Fig.-3 protocol: superposition, sequential pair
/// rotations each followed by an ancilla measurement, full restart on
/// rejection, then a computational-basis measurement of the n+m qubits.
ShotResult run_sampling_shot(const GibbsCircuitPlan& plan,
                             std::mt19937_64& rng, bool decomposed = false);

}  // namespace rbmgs
