// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "rbmgs/pauli.hpp"

namespace rbmgs {

/// Guard on 1/s(x); below this the sign layer is treated as singular.
inline constexpr double kSignEpsilon = 1e-12;

class SignSingularityError : public std::runtime_error {
 public:
  explicit SignSingularityError(double sign)
      : std::runtime_error("sign layer value " + std::to_string(sign) +
                           " below singularity guard"),
        sign_(sign) {}
  double sign() const { return sign_; }

 private:
  double sign_;
};

/// Trainable weights of the three-layer ansatz: visible biases a, hidden
/// biases b, couplings w, sign weights d and sign offset c.
///
/// Flat layout (used for gradients and checkpoints):
///   [a_0..a_{n-1}, b_0..b_{m-1}, w_00..w_0{m-1}, ..., w_{n-1}{m-1}, d_0..d_{n-1}, c]
struct RbmParameters {
  Eigen::VectorXd a;  // n
  Eigen::VectorXd b;  // m
  Eigen::MatrixXd w;  // n x m
  Eigen::VectorXd d;  // n
  double c = 0.0;

  int n() const { return static_cast<int>(a.size()); }
  int m() const { return static_cast<int>(b.size()); }
  int parameter_count() const { return n() + m() + n() * m() + n() + 1; }

  static RbmParameters zeros(int n, int m);
  static RbmParameters random_uniform(int n, int m, double half_width,
                                      std::mt19937_64& rng);

  Eigen::VectorXd to_flat() const;
  static RbmParameters from_flat(int n, int m, const Eigen::VectorXd& flat);

  bool is_finite() const;
};

/// log(2 cosh t), overflow-safe for large |t|.
double log_two_cosh(double t);

/// theta_j = sum_i w_ij sigma_i + b_j.
Eigen::VectorXd hidden_activation(const RbmParameters& p,
                                  const SpinConfiguration& x);

/// log sum_h exp(sum_i a_i sigma_i + sum_j b_j h_j + sum_ij w_ij sigma_i h_j)
/// = sum_i a_i sigma_i + sum_j log(2 cosh theta_j), overflow-safe.
double unnormalized_log_prob(const RbmParameters& p, const SpinConfiguration& x);
double unnormalized_log_prob(const RbmParameters& p, std::uint64_t x_index);

/// phi(x) = sqrt(P(x)) = exp((unnormalized_log_prob - log_z) / 2).
double amplitude(const RbmParameters& p, const SpinConfiguration& x,
                 double log_z);

/// s(x) = tanh(sum_i d_i sigma_i + c).
double sign_value(const RbmParameters& p, const SpinConfiguration& x);
double sign_value(const RbmParameters& p, std::uint64_t x_index);

/// Phi(x) = phi(x) s(x).
double joint_weight(const RbmParameters& p, const SpinConfiguration& x,
                    double log_z);

/// Log-derivatives D_p(x) of log|Phi| in flat layout, with the constant
/// <.>_RBM pieces of the a/b/w entries dropped (they cancel in the gradient).
/// Throws SignSingularityError when |s(x)| < kSignEpsilon.
Eigen::VectorXd log_derivatives(const RbmParameters& p,
                                const SpinConfiguration& x);

/// log_derivatives with the sign-layer value substituted; backs the clamp
/// guard policy of the optimizer.
Eigen::VectorXd log_derivatives_with_sign(const RbmParameters& p,
                                          const SpinConfiguration& x,
                                          double sign);

// Checkpoint file: JSON object {n, m, a, b, w, d, c} with w as n rows of m.
void save_parameters(const std::string& path, const RbmParameters& p);
RbmParameters load_parameters(const std::string& path);

}  // namespace rbmgs
