// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

// Test-only reference implementations. Everything here recomputes results
// from first principles (explicit Kronecker products, full 2^(n+m)
// enumeration) and stays independent of the solver paths under test.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "rbmgs/pauli.hpp"
#include "rbmgs/rbm.hpp"

namespace rbmgs::testing {

inline Eigen::Matrix2cd pauli_matrix(PauliAxis axis) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  switch (axis) {
    case PauliAxis::X:
      m << 0, 1, 1, 0;
      break;
    case PauliAxis::Y:
      m << 0, -1i, 1i, 0;
      break;
    case PauliAxis::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

/// Dense matrix of one term by explicit Kronecker products; qubit 0 is the
/// fastest (least significant) index, matching the solver convention.
inline Eigen::MatrixXcd kron_term_matrix(const PauliTerm& term, int n_qubits) {
  Eigen::MatrixXcd matrix = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    Eigen::Matrix2cd factor = Eigen::Matrix2cd::Identity();
    for (const auto& op : term.operators) {
      if (op.qubit == q) factor = pauli_matrix(op.axis);
    }
    Eigen::MatrixXcd next(matrix.rows() * 2, matrix.cols() * 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        next.block(r * matrix.rows(), c * matrix.cols(), matrix.rows(),
                   matrix.cols()) = factor(r, c) * matrix;
      }
    }
    matrix = std::move(next);
  }
  return term.coefficient * matrix;
}

inline Eigen::MatrixXcd kron_matrix(const PauliHamiltonian& h) {
  const Eigen::Index dim = Eigen::Index{1} << h.n_qubits();
  Eigen::MatrixXcd matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : h.terms()) {
    matrix += kron_term_matrix(term, h.n_qubits());
  }
  return matrix;
}

/// sum over all 2^m hidden assignments of exp(a.sigma + b.h + sigma W h).
inline double brute_rbm_numerator(const RbmParameters& p,
                                  const SpinConfiguration& x) {
  const int m = p.m();
  double total = 0.0;
  for (std::uint64_t h_bits = 0; h_bits < (std::uint64_t{1} << m); ++h_bits) {
    double exponent = 0.0;
    for (int i = 0; i < p.n(); ++i) exponent += p.a(i) * x.spin(i);
    for (int j = 0; j < m; ++j) {
      const double h = (h_bits >> j) & 1u ? -1.0 : 1.0;
      exponent += p.b(j) * h;
      for (int i = 0; i < p.n(); ++i) exponent += p.w(i, j) * x.spin(i) * h;
    }
    total += std::exp(exponent);
  }
  return total;
}

struct BruteVisible {
  std::vector<double> probabilities;  // solver index convention
  double log_z = 0.0;
};

inline BruteVisible brute_visible_distribution(const RbmParameters& p) {
  const std::uint64_t dim = std::uint64_t{1} << p.n();
  BruteVisible result;
  result.probabilities.resize(dim);
  double z = 0.0;
  for (std::uint64_t x = 0; x < dim; ++x) {
    result.probabilities[x] =
        brute_rbm_numerator(p, SpinConfiguration::from_index(x, p.n()));
    z += result.probabilities[x];
  }
  for (auto& prob : result.probabilities) prob /= z;
  result.log_z = std::log(z);
  return result;
}

/// Q(y) over joint configurations in the circuit bit convention
/// (bit 1 <-> spin +1), visible bits low, hidden bits high.
inline std::vector<double> brute_joint_regulated(const RbmParameters& p,
                                                 double k) {
  const int n = p.n();
  const int m = p.m();
  std::vector<double> q(std::size_t{1} << (n + m));
  double z = 0.0;
  for (std::uint64_t y = 0; y < q.size(); ++y) {
    double exponent = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sigma = (y >> i) & 1u ? 1.0 : -1.0;
      exponent += p.a(i) * sigma;
    }
    for (int j = 0; j < m; ++j) {
      const double h = (y >> (n + j)) & 1u ? 1.0 : -1.0;
      exponent += p.b(j) * h;
      for (int i = 0; i < n; ++i) {
        const double sigma = (y >> i) & 1u ? 1.0 : -1.0;
        exponent += p.w(i, j) * sigma * h;
      }
    }
    q[y] = std::exp(exponent / k);
    z += q[y];
  }
  for (auto& value : q) value /= z;
  return q;
}

/// Overall circuit acceptance probability from the definition:
/// sum_y e^{E(y)/k} e^{-sum|w|/k} / sum_y e^{(a.sigma + b.h)/k}.
inline double brute_success_probability(const RbmParameters& p, double k) {
  const int n = p.n();
  const int m = p.m();
  double numerator = 0.0;
  double denominator = 0.0;
  const double w_total = p.w.array().abs().sum();
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << (n + m)); ++y) {
    double bias = 0.0;
    double coupling = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sigma = (y >> i) & 1u ? 1.0 : -1.0;
      bias += p.a(i) * sigma;
      for (int j = 0; j < m; ++j) {
        const double h = (y >> (n + j)) & 1u ? 1.0 : -1.0;
        coupling += p.w(i, j) * sigma * h;
      }
    }
    for (int j = 0; j < m; ++j) {
      const double h = (y >> (n + j)) & 1u ? 1.0 : -1.0;
      bias += p.b(j) * h;
    }
    numerator += std::exp((bias + coupling - w_total) / k);
    denominator += std::exp(bias / k);
  }
  return numerator / denominator;
}

/// Phi vector (solver indexing) built from the log-domain weight and the
/// sign layer; unnormalized scale is irrelevant for Rayleigh quotients.
inline Eigen::VectorXd phi_vector(const RbmParameters& p) {
  const std::uint64_t dim = std::uint64_t{1} << p.n();
  Eigen::VectorXd phi(static_cast<Eigen::Index>(dim));
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    logs[x] = unnormalized_log_prob(p, x);
    max_log = std::max(max_log, logs[x]);
  }
  for (std::uint64_t x = 0; x < dim; ++x) {
    phi(static_cast<Eigen::Index>(x)) =
        std::exp(0.5 * (logs[x] - max_log)) * sign_value(p, x);
  }
  return phi;
}

/// <Phi|H|Phi>/<Phi|Phi> with the dense Kronecker matrix.
inline double rayleigh_quotient(const Eigen::MatrixXcd& matrix,
                                const Eigen::VectorXd& phi) {
  const std::complex<double> num = phi.cast<std::complex<double>>().dot(
      matrix * phi.cast<std::complex<double>>());
  return num.real() / phi.squaredNorm();
}

inline double variational_energy(const Eigen::MatrixXcd& matrix,
                                 const RbmParameters& p) {
  return rayleigh_quotient(matrix, phi_vector(p));
}

/// Central finite differences of the variational energy in flat layout.
inline Eigen::VectorXd finite_difference_gradient(
    const Eigen::MatrixXcd& matrix, const RbmParameters& p,
    double step = 1e-5) {
  const Eigen::VectorXd flat = p.to_flat();
  Eigen::VectorXd gradient(flat.size());
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    Eigen::VectorXd shifted = flat;
    shifted(i) = flat(i) + step;
    const double plus = variational_energy(
        matrix, RbmParameters::from_flat(p.n(), p.m(), shifted));
    shifted(i) = flat(i) - step;
    const double minus = variational_energy(
        matrix, RbmParameters::from_flat(p.n(), p.m(), shifted));
    gradient(i) = (plus - minus) / (2.0 * step);
  }
  return gradient;
}

inline PauliTerm random_even_y_term(int n_qubits, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> weight(1, n_qubits);
  std::uniform_int_distribution<int> axis_pick(0, 2);
  PauliTerm term;
  term.coefficient = coeff(rng);
  std::vector<int> qubits(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) qubits[static_cast<std::size_t>(q)] = q;
  std::shuffle(qubits.begin(), qubits.end(), rng);
  const int w = weight(rng);
  for (int i = 0; i < w; ++i) {
    const auto axis = static_cast<PauliAxis>(axis_pick(rng));
    term.operators.push_back({axis, qubits[static_cast<std::size_t>(i)]});
  }
  // Repair the Y parity by demoting one Y to X.
  if (term.y_count() % 2 != 0) {
    for (auto& op : term.operators) {
      if (op.axis == PauliAxis::Y) {
        op.axis = PauliAxis::X;
        break;
      }
    }
  }
  return term;
}

inline PauliHamiltonian random_even_y_hamiltonian(int n_qubits, int n_terms,
                                                  std::mt19937_64& rng) {
  std::vector<PauliTerm> terms;
  terms.reserve(static_cast<std::size_t>(n_terms));
  for (int t = 0; t < n_terms; ++t) {
    terms.push_back(random_even_y_term(n_qubits, rng));
  }
  return PauliHamiltonian(n_qubits, std::move(terms));
}

/// Uniform parameters redrawn until min_x |s(x)| exceeds the floor.
inline RbmParameters random_sign_safe_parameters(int n, int m,
                                                 double half_width,
                                                 double min_abs_sign,
                                                 std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    RbmParameters p = RbmParameters::random_uniform(n, m, half_width, rng);
    bool safe = true;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n) && safe; ++x) {
      safe = std::abs(sign_value(p, x)) > min_abs_sign;
    }
    if (safe) return p;
  }
  throw std::runtime_error("could not draw sign-safe parameters");
}

}  // namespace rbmgs::testing
