// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbmgs/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace rbmgs {

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 26) {
    throw std::invalid_argument("unsupported qubit count " +
                                std::to_string(num_qubits));
  }
  amplitudes_.assign(std::size_t{1} << num_qubits, {0.0, 0.0});
  amplitudes_[0] = {1.0, 0.0};
}

void StateVector::reset_to_zero_state() {
  std::fill(amplitudes_.begin(), amplitudes_.end(),
            std::complex<double>{0.0, 0.0});
  amplitudes_[0] = {1.0, 0.0};
}

double StateVector::norm() const {
  double total = 0.0;
  for (const auto& amp : amplitudes_) total += std::norm(amp);
  return std::sqrt(total);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> probs(amplitudes_.size());
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    probs[i] = std::norm(amplitudes_[i]);
  }
  return probs;
}

void StateVector::check_qubit(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) {
    throw std::out_of_range("qubit " + std::to_string(qubit) +
                            " out of range for " + std::to_string(num_qubits_) +
                            " qubits");
  }
}

void StateVector::apply_ry(int qubit, double angle) {
  check_qubit(qubit);
  const double cos_half = std::cos(angle / 2.0);
  const double sin_half = std::sin(angle / 2.0);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t base = 0; base < amplitudes_.size(); ++base) {
    if (base & bit) continue;
    const auto a0 = amplitudes_[base];
    const auto a1 = amplitudes_[base | bit];
    amplitudes_[base] = cos_half * a0 - sin_half * a1;
    amplitudes_[base | bit] = sin_half * a0 + cos_half * a1;
  }
}

void StateVector::apply_x(int qubit) {
  check_qubit(qubit);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t base = 0; base < amplitudes_.size(); ++base) {
    if (base & bit) continue;
    std::swap(amplitudes_[base], amplitudes_[base | bit]);
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t base = 0; base < amplitudes_.size(); ++base) {
    if ((base & cbit) == 0 || (base & tbit)) continue;
    std::swap(amplitudes_[base], amplitudes_[base | tbit]);
  }
}

void StateVector::apply_cry(int control, int target, double angle) {
  check_qubit(control);
  check_qubit(target);
  const double cos_half = std::cos(angle / 2.0);
  const double sin_half = std::sin(angle / 2.0);
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t base = 0; base < amplitudes_.size(); ++base) {
    if ((base & cbit) == 0 || (base & tbit)) continue;
    const auto a0 = amplitudes_[base];
    const auto a1 = amplitudes_[base | tbit];
    amplitudes_[base] = cos_half * a0 - sin_half * a1;
    amplitudes_[base | tbit] = sin_half * a0 + cos_half * a1;
  }
}

void StateVector::apply_ccry(int control1, int control2, int target,
                             double angle, int polarity) {
  check_qubit(control1);
  check_qubit(control2);
  check_qubit(target);
  if (polarity < 0 || polarity > 3) {
    throw std::invalid_argument("polarity must be in [0, 3]");
  }
  const double cos_half = std::cos(angle / 2.0);
  const double sin_half = std::sin(angle / 2.0);
  const std::size_t c1bit = std::size_t{1} << control1;
  const std::size_t c2bit = std::size_t{1} << control2;
  const std::size_t tbit = std::size_t{1} << target;
  const std::size_t want1 = (polarity & 2) ? c1bit : 0;
  const std::size_t want2 = (polarity & 1) ? c2bit : 0;
  for (std::size_t base = 0; base < amplitudes_.size(); ++base) {
    if (base & tbit) continue;
    if ((base & c1bit) != want1 || (base & c2bit) != want2) continue;
    const auto a0 = amplitudes_[base];
    const auto a1 = amplitudes_[base | tbit];
    amplitudes_[base] = cos_half * a0 - sin_half * a1;
    amplitudes_[base | tbit] = sin_half * a0 + cos_half * a1;
  }
}

GibbsCircuitPlan plan_circuit(const RbmParameters& p, double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("regulation constant k must be positive");
  }
  if (!p.is_finite()) {
    throw std::invalid_argument("non-finite parameter");
  }
  const int n = p.n();
  const int m = p.m();
  GibbsCircuitPlan plan;
  plan.k = k;
  plan.visible_angles.resize(n);
  plan.hidden_angles.resize(m);
  plan.equal_angles.resize(n, m);
  plan.unequal_angles.resize(n, m);
  // e^{t/k}/(e^{t/k}+e^{-t/k}) = logistic(2t/k), stable in either tail.
  const auto bias_angle = [k](double t) {
    return 2.0 * std::asin(std::sqrt(1.0 / (1.0 + std::exp(-2.0 * t / k))));
  };
  for (int i = 0; i < n; ++i) plan.visible_angles(i) = bias_angle(p.a(i));
  for (int j = 0; j < m; ++j) plan.hidden_angles(j) = bias_angle(p.b(j));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double w = p.w(i, j);
      // e^{+-w/k} e^{-|w|/k} <= 1 holds exactly in this exponent form.
      plan.equal_angles(i, j) =
          2.0 * std::asin(std::exp((w - std::abs(w)) / (2.0 * k)));
      plan.unequal_angles(i, j) =
          2.0 * std::asin(std::exp((-w - std::abs(w)) / (2.0 * k)));
    }
  }
  return plan;
}

std::vector<Gate> decompose_ccry(double angle, int control1, int control2,
                                 int target, int polarity) {
  if (polarity < 0 || polarity > 3) {
    throw std::invalid_argument("polarity must be in [0, 3]");
  }
  std::vector<Gate> gates;
  const bool flip1 = (polarity & 2) == 0;
  const bool flip2 = (polarity & 1) == 0;
  if (flip1) gates.push_back({Gate::Kind::X, control1, -1, 0.0});
  if (flip2) gates.push_back({Gate::Kind::X, control2, -1, 0.0});
  gates.push_back({Gate::Kind::CRy, control2, target, angle / 2.0});
  gates.push_back({Gate::Kind::Cnot, control1, control2, 0.0});
  gates.push_back({Gate::Kind::CRy, control2, target, -angle / 2.0});
  gates.push_back({Gate::Kind::Cnot, control1, control2, 0.0});
  gates.push_back({Gate::Kind::CRy, control1, target, angle / 2.0});
  if (flip2) gates.push_back({Gate::Kind::X, control2, -1, 0.0});
  if (flip1) gates.push_back({Gate::Kind::X, control1, -1, 0.0});
  return gates;
}

void apply_gates(StateVector& state, const std::vector<Gate>& gates) {
  for (const auto& gate : gates) {
    switch (gate.kind) {
      case Gate::Kind::Ry:
        state.apply_ry(gate.q0, gate.angle);
        break;
      case Gate::Kind::X:
        state.apply_x(gate.q0);
        break;
      case Gate::Kind::Cnot:
        state.apply_cnot(gate.q0, gate.q1);
        break;
      case Gate::Kind::CRy:
        state.apply_cry(gate.q0, gate.q1, gate.angle);
        break;
    }
  }
}

void apply_controlled_pair_rotation(StateVector& state, int qubit_i,
                                    int qubit_j, int ancilla,
                                    double theta_equal, double theta_unequal,
                                    bool decomposed) {
  if (decomposed) {
    // Polarity bits are (qubit_i, qubit_j); equal bits rotate by theta_equal.
    for (const int polarity : {3, 0, 1, 2}) {
      const double angle =
          (polarity == 0 || polarity == 3) ? theta_equal : theta_unequal;
      apply_gates(state,
                  decompose_ccry(angle, qubit_i, qubit_j, ancilla, polarity));
    }
    return;
  }
  // The four rotations act on disjoint control subspaces; one fused pass
  // applies exactly the same unitary.
  const double cos_eq = std::cos(theta_equal / 2.0);
  const double sin_eq = std::sin(theta_equal / 2.0);
  const double cos_ne = std::cos(theta_unequal / 2.0);
  const double sin_ne = std::sin(theta_unequal / 2.0);
  const std::size_t ibit = std::size_t{1} << qubit_i;
  const std::size_t jbit = std::size_t{1} << qubit_j;
  const std::size_t abit = std::size_t{1} << ancilla;
  for (std::size_t base = 0; base < state.dim(); ++base) {
    if (base & abit) continue;
    const bool equal = ((base & ibit) != 0) == ((base & jbit) != 0);
    const double cos_half = equal ? cos_eq : cos_ne;
    const double sin_half = equal ? sin_eq : sin_ne;
    const auto a0 = state.amplitude(base);
    const auto a1 = state.amplitude(base | abit);
    state.amplitude(base) = cos_half * a0 - sin_half * a1;
    state.amplitude(base | abit) = sin_half * a0 + cos_half * a1;
  }
}

namespace {

double ancilla_one_probability(const StateVector& state, int ancilla) {
  const std::size_t abit = std::size_t{1} << ancilla;
  double prob = 0.0;
  for (std::size_t index = 0; index < state.dim(); ++index) {
    if (index & abit) prob += std::norm(state.amplitude(index));
  }
  return prob;
}

// Projects onto ancilla = 1, renormalizes, and moves the branch back to
// ancilla = 0 so the qubit can be reused.
void collapse_and_reset(StateVector& state, int ancilla, double success_prob) {
  const std::size_t abit = std::size_t{1} << ancilla;
  const double scale = 1.0 / std::sqrt(success_prob);
  for (std::size_t base = 0; base < state.dim(); ++base) {
    if (base & abit) continue;
    state.amplitude(base) = scale * state.amplitude(base | abit);
    state.amplitude(base | abit) = 0.0;
  }
}

}  // namespace

MeasurementOutcome measure_ancilla_postselect(StateVector& state, int ancilla) {
  const double prob = ancilla_one_probability(state, ancilla);
  if (prob <= 0.0) {
    throw std::runtime_error(
        "zero-norm post-selection: ancilla never reaches |1>");
  }
  collapse_and_reset(state, ancilla, prob);
  return {prob, true};
}

MeasurementOutcome measure_ancilla_shot(StateVector& state, int ancilla,
                                        std::mt19937_64& rng) {
  const double prob = ancilla_one_probability(state, ancilla);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  if (uniform(rng) >= prob) {
    return {prob, false};
  }
  collapse_and_reset(state, ancilla, prob);
  return {prob, true};
}

namespace {

void prepare_superposition(StateVector& state, const GibbsCircuitPlan& plan) {
  for (int i = 0; i < plan.n(); ++i) {
    state.apply_ry(i, plan.visible_angles(i));
  }
  for (int j = 0; j < plan.m(); ++j) {
    state.apply_ry(plan.n() + j, plan.hidden_angles(j));
  }
}

}  // namespace

AnalyticRunResult run_analytic(const GibbsCircuitPlan& plan, bool decomposed) {
  const int n = plan.n();
  const int m = plan.m();
  const int ancilla = n + m;
  StateVector state(plan.total_qubits());
  prepare_superposition(state, plan);
  AnalyticRunResult result;
  result.step_success_probs.reserve(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      apply_controlled_pair_rotation(state, i, n + j, ancilla,
                                     plan.equal_angles(i, j),
                                     plan.unequal_angles(i, j), decomposed);
      const auto outcome = measure_ancilla_postselect(state, ancilla);
      result.step_success_probs.push_back(outcome.success_prob);
      result.overall_success_prob *= outcome.success_prob;
    }
  }
  // All mass sits on ancilla = 0 after the resets.
  result.joint_probabilities.assign(std::size_t{1} << (n + m), 0.0);
  for (std::size_t y = 0; y < result.joint_probabilities.size(); ++y) {
    result.joint_probabilities[y] = std::norm(state.amplitude(y));
  }
  return result;
}

ShotResult run_sampling_shot(const GibbsCircuitPlan& plan,
                             std::mt19937_64& rng, bool decomposed) {
  const int n = plan.n();
  const int m = plan.m();
  const int ancilla = n + m;
  constexpr std::uint64_t kMaxRestarts = 100'000'000;
  StateVector state(plan.total_qubits());
  ShotResult result;
  for (;;) {
    state.reset_to_zero_state();
    prepare_superposition(state, plan);
    bool accepted = true;
    for (int i = 0; i < n && accepted; ++i) {
      for (int j = 0; j < m; ++j) {
        apply_controlled_pair_rotation(state, i, n + j, ancilla,
                                       plan.equal_angles(i, j),
                                       plan.unequal_angles(i, j), decomposed);
        if (!measure_ancilla_shot(state, ancilla, rng).accepted) {
          accepted = false;
          break;
        }
      }
    }
    if (accepted) break;
    if (++result.restarts > kMaxRestarts) {
      throw std::runtime_error("sampling shot exceeded the restart bound");
    }
  }
  // Computational-basis measurement of the n+m system qubits.
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double roll = uniform(rng);
  double cumulative = 0.0;
  const std::uint64_t mask = (std::uint64_t{1} << (n + m)) - 1;
  std::uint64_t sampled = 0;
  bool found = false;
  for (std::size_t index = 0; index < state.dim() && !found; ++index) {
    const double prob = std::norm(state.amplitude(index));
    if (prob == 0.0) continue;
    cumulative += prob;
    sampled = index & mask;  // roundoff fallback: keep the last nonzero bin
    found = roll < cumulative;
  }
  result.joint_configuration = sampled;
  return result;
}

}  // namespace rbmgs
