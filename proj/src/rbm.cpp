// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbmgs/rbm.hpp"

#include <cmath>
#include <fstream>

#include "param_json.hpp"

namespace rbmgs {

namespace {

Eigen::VectorXd spins_of(const SpinConfiguration& x) {
  Eigen::VectorXd sigma(x.size());
  for (int i = 0; i < x.size(); ++i) sigma(i) = x.spin(i);
  return sigma;
}

Eigen::VectorXd spins_of(std::uint64_t index, int n) {
  Eigen::VectorXd sigma(n);
  for (int i = 0; i < n; ++i) sigma(i) = (index >> i) & 1u ? -1.0 : 1.0;
  return sigma;
}

double log_prob_impl(const RbmParameters& p, const Eigen::VectorXd& sigma) {
  double value = p.a.dot(sigma);
  const Eigen::VectorXd theta = p.w.transpose() * sigma + p.b;
  for (int j = 0; j < theta.size(); ++j) value += log_two_cosh(theta(j));
  return value;
}

double sign_impl(const RbmParameters& p, const Eigen::VectorXd& sigma) {
  return std::tanh(p.d.dot(sigma) + p.c);
}

}  // namespace

// The direct form overflows for |t| above ~709.
double log_two_cosh(double t) {
  const double at = std::abs(t);
  return at + std::log1p(std::exp(-2.0 * at));
}

RbmParameters RbmParameters::zeros(int n, int m) {
  RbmParameters p;
  p.a = Eigen::VectorXd::Zero(n);
  p.b = Eigen::VectorXd::Zero(m);
  p.w = Eigen::MatrixXd::Zero(n, m);
  p.d = Eigen::VectorXd::Zero(n);
  p.c = 0.0;
  return p;
}

RbmParameters RbmParameters::random_uniform(int n, int m, double half_width,
                                            std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-half_width, half_width);
  RbmParameters p = zeros(n, m);
  for (int i = 0; i < n; ++i) p.a(i) = uniform(rng);
  for (int j = 0; j < m; ++j) p.b(j) = uniform(rng);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) p.w(i, j) = uniform(rng);
  }
  for (int i = 0; i < n; ++i) p.d(i) = uniform(rng);
  p.c = uniform(rng);
  return p;
}

Eigen::VectorXd RbmParameters::to_flat() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index offset = 0;
  flat.segment(offset, n()) = a;
  offset += n();
  flat.segment(offset, m()) = b;
  offset += m();
  for (int i = 0; i < n(); ++i) {
    flat.segment(offset, m()) = w.row(i);
    offset += m();
  }
  flat.segment(offset, n()) = d;
  offset += n();
  flat(offset) = c;
  return flat;
}

RbmParameters RbmParameters::from_flat(int n, int m,
                                       const Eigen::VectorXd& flat) {
  if (flat.size() != n + m + n * m + n + 1) {
    throw std::invalid_argument("flat parameter vector has wrong length");
  }
  RbmParameters p = zeros(n, m);
  Eigen::Index offset = 0;
  p.a = flat.segment(offset, n);
  offset += n;
  p.b = flat.segment(offset, m);
  offset += m;
  for (int i = 0; i < n; ++i) {
    p.w.row(i) = flat.segment(offset, m);
    offset += m;
  }
  p.d = flat.segment(offset, n);
  offset += n;
  p.c = flat(offset);
  return p;
}

bool RbmParameters::is_finite() const {
  return a.allFinite() && b.allFinite() && w.allFinite() && d.allFinite() &&
         std::isfinite(c);
}

Eigen::VectorXd hidden_activation(const RbmParameters& p,
                                  const SpinConfiguration& x) {
  return p.w.transpose() * spins_of(x) + p.b;
}

double unnormalized_log_prob(const RbmParameters& p,
                             const SpinConfiguration& x) {
  return log_prob_impl(p, spins_of(x));
}

double unnormalized_log_prob(const RbmParameters& p, std::uint64_t x_index) {
  return log_prob_impl(p, spins_of(x_index, p.n()));
}

double amplitude(const RbmParameters& p, const SpinConfiguration& x,
                 double log_z) {
  return std::exp(0.5 * (unnormalized_log_prob(p, x) - log_z));
}

double sign_value(const RbmParameters& p, const SpinConfiguration& x) {
  return sign_impl(p, spins_of(x));
}

double sign_value(const RbmParameters& p, std::uint64_t x_index) {
  return sign_impl(p, spins_of(x_index, p.n()));
}

double joint_weight(const RbmParameters& p, const SpinConfiguration& x,
                    double log_z) {
  return amplitude(p, x, log_z) * sign_value(p, x);
}

Eigen::VectorXd log_derivatives(const RbmParameters& p,
                                const SpinConfiguration& x) {
  const double s = sign_value(p, x);
  if (std::abs(s) < kSignEpsilon) {
    throw SignSingularityError(s);
  }
  return log_derivatives_with_sign(p, x, s);
}

Eigen::VectorXd log_derivatives_with_sign(const RbmParameters& p,
                                          const SpinConfiguration& x,
                                          double s) {
  const Eigen::VectorXd sigma = spins_of(x);
  const int n = p.n();
  const int m = p.m();
  const Eigen::VectorXd tanh_theta =
      (p.w.transpose() * sigma + p.b).array().tanh();
  Eigen::VectorXd derivs(p.parameter_count());
  Eigen::Index offset = 0;
  derivs.segment(offset, n) = 0.5 * sigma;
  offset += n;
  derivs.segment(offset, m) = 0.5 * tanh_theta;
  offset += m;
  for (int i = 0; i < n; ++i) {
    derivs.segment(offset, m) = 0.5 * sigma(i) * tanh_theta;
    offset += m;
  }
  const double sign_term = 1.0 / s - s;
  derivs.segment(offset, n) = sign_term * sigma;
  offset += n;
  derivs(offset) = sign_term;
  return derivs;
}

namespace detail {

nlohmann::json parameters_to_json(const RbmParameters& p) {
  nlohmann::json j;
  j["n"] = p.n();
  j["m"] = p.m();
  j["a"] = std::vector<double>(p.a.data(), p.a.data() + p.a.size());
  j["b"] = std::vector<double>(p.b.data(), p.b.data() + p.b.size());
  std::vector<std::vector<double>> w_rows;
  w_rows.reserve(static_cast<std::size_t>(p.n()));
  for (int i = 0; i < p.n(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(p.m()));
    for (int col = 0; col < p.m(); ++col) {
      row[static_cast<std::size_t>(col)] = p.w(i, col);
    }
    w_rows.push_back(std::move(row));
  }
  j["w"] = w_rows;
  j["d"] = std::vector<double>(p.d.data(), p.d.data() + p.d.size());
  j["c"] = p.c;
  return j;
}

RbmParameters parameters_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  const auto a = j.at("a").get<std::vector<double>>();
  const auto b = j.at("b").get<std::vector<double>>();
  const auto w = j.at("w").get<std::vector<std::vector<double>>>();
  const auto d = j.at("d").get<std::vector<double>>();
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != m ||
      static_cast<int>(d.size()) != n || static_cast<int>(w.size()) != n) {
    throw std::runtime_error("parameter dimensions are inconsistent");
  }
  RbmParameters p = RbmParameters::zeros(n, m);
  for (int i = 0; i < n; ++i) p.a(i) = a[static_cast<std::size_t>(i)];
  for (int jj = 0; jj < m; ++jj) p.b(jj) = b[static_cast<std::size_t>(jj)];
  for (int i = 0; i < n; ++i) {
    const auto& row = w[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != m) {
      throw std::runtime_error("parameter dimensions are inconsistent");
    }
    for (int jj = 0; jj < m; ++jj) {
      p.w(i, jj) = row[static_cast<std::size_t>(jj)];
    }
  }
  for (int i = 0; i < n; ++i) p.d(i) = d[static_cast<std::size_t>(i)];
  p.c = j.at("c").get<double>();
  if (!p.is_finite()) {
    throw std::runtime_error("parameters contain non-finite values");
  }
  return p;
}

}  // namespace detail

void save_parameters(const std::string& path, const RbmParameters& p) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write parameter file: " + path);
  }
  out << detail::parameters_to_json(p).dump(2) << "\n";
}

RbmParameters load_parameters(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open parameter file: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
    return detail::parameters_from_json(j);
  } catch (const nlohmann::json::exception& error) {
    throw std::runtime_error("bad parameter file " + path + ": " +
                             error.what());
  }
}

}  // namespace rbmgs
