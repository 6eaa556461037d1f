// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbmgs/pauli.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>

namespace rbmgs {

char axis_letter(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::X:
      return 'X';
    case PauliAxis::Y:
      return 'Y';
    case PauliAxis::Z:
      return 'Z';
  }
  return '?';
}

int PauliTerm::y_count() const {
  int count = 0;
  for (const auto& op : operators) {
    if (op.axis == PauliAxis::Y) ++count;
  }
  return count;
}

SpinConfiguration::SpinConfiguration(std::vector<std::int8_t> values)
    : values_(std::move(values)) {
  for (const auto v : values_) {
    if (v != 1 && v != -1) {
      throw std::invalid_argument("spin values must be +1 or -1");
    }
  }
}

SpinConfiguration SpinConfiguration::from_index(std::uint64_t index, int n) {
  std::vector<std::int8_t> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] = (index >> i) & 1u ? -1 : 1;
  }
  SpinConfiguration x;
  x.values_ = std::move(values);
  return x;
}

std::uint64_t SpinConfiguration::to_index() const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0) index |= std::uint64_t{1} << i;
  }
  return index;
}

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

namespace {

PauliTerm normalize_term(PauliTerm term, int n_qubits) {
  std::sort(term.operators.begin(), term.operators.end(),
            [](const PauliOperator& lhs, const PauliOperator& rhs) {
              return lhs.qubit < rhs.qubit;
            });
  for (std::size_t i = 0; i < term.operators.size(); ++i) {
    const auto& op = term.operators[i];
    if (op.qubit < 0 || op.qubit >= n_qubits) {
      throw std::invalid_argument("operator qubit index " +
                                  std::to_string(op.qubit) +
                                  " out of range for " +
                                  std::to_string(n_qubits) + " qubits");
    }
    if (i > 0 && term.operators[i - 1].qubit == op.qubit) {
      throw std::invalid_argument("duplicate qubit index " +
                                  std::to_string(op.qubit) + " within a term");
    }
  }
  if (!std::isfinite(term.coefficient)) {
    throw std::invalid_argument("non-finite term coefficient");
  }
  if (term.y_count() % 2 != 0) {
    throw std::invalid_argument(
        "odd Y count makes the Hamiltonian non-real; rejected");
  }
  return term;
}

}  // namespace

PauliHamiltonian::PauliHamiltonian(int n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits) {
  if (n_qubits <= 0) {
    throw std::invalid_argument("n_qubits must be positive");
  }
  terms_.reserve(terms.size());
  compiled_.reserve(terms.size());
  for (auto& term : terms) {
    PauliTerm normalized = normalize_term(std::move(term), n_qubits);
    CompiledTerm compiled{0, 0, normalized.coefficient};
    int n_y = 0;
    for (const auto& op : normalized.operators) {
      const std::uint64_t bit = std::uint64_t{1} << op.qubit;
      switch (op.axis) {
        case PauliAxis::X:
          compiled.flip_mask |= bit;
          break;
        case PauliAxis::Y:
          compiled.flip_mask |= bit;
          compiled.sign_mask |= bit;
          ++n_y;
          break;
        case PauliAxis::Z:
          compiled.sign_mask |= bit;
          break;
      }
    }
    // i^(#Y) with even #Y is +1 or -1.
    if (n_y % 4 == 2) compiled.base = -compiled.base;
    terms_.push_back(std::move(normalized));
    compiled_.push_back(compiled);
  }
}

std::pair<SpinConfiguration, double> apply_term(const PauliTerm& term,
                                                const SpinConfiguration& x) {
  if (term.y_count() % 2 != 0) {
    throw std::invalid_argument("apply_term on odd-Y term");
  }
  std::vector<std::int8_t> flipped(x.values());
  double factor = term.coefficient;
  int n_y = 0;
  for (const auto& op : term.operators) {
    const auto q = static_cast<std::size_t>(op.qubit);
    const int spin = flipped[q];
    switch (op.axis) {
      case PauliAxis::X:
        flipped[q] = static_cast<std::int8_t>(-spin);
        break;
      case PauliAxis::Y:
        // Y|0> = i|1>, Y|1> = -i|0>: factor i*sigma, spin flips.
        factor *= spin;
        ++n_y;
        flipped[q] = static_cast<std::int8_t>(-spin);
        break;
      case PauliAxis::Z:
        factor *= spin;
        break;
    }
  }
  if (n_y % 4 == 2) factor = -factor;
  return {SpinConfiguration(std::move(flipped)), factor};
}

std::vector<std::pair<std::uint64_t, double>>
PauliHamiltonian::connected_indices(std::uint64_t x) const {
  std::vector<std::pair<std::uint64_t, double>> out;
  out.reserve(compiled_.size());
  for (const auto& term : compiled_) {
    const int parity = std::popcount(term.sign_mask & x) & 1;
    const double amplitude = parity ? -term.base : term.base;
    out.emplace_back(x ^ term.flip_mask, amplitude);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
  std::vector<std::pair<std::uint64_t, double>> merged;
  merged.reserve(out.size());
  for (const auto& [target, amplitude] : out) {
    if (!merged.empty() && merged.back().first == target) {
      merged.back().second += amplitude;
    } else {
      merged.emplace_back(target, amplitude);
    }
  }
  std::erase_if(merged, [](const auto& entry) {
    return std::abs(entry.second) < kAmplitudePruneThreshold;
  });
  return merged;
}

std::vector<std::pair<SpinConfiguration, double>>
PauliHamiltonian::connected_configurations(const SpinConfiguration& x) const {
  if (x.size() != n_qubits_) {
    throw std::invalid_argument("configuration size does not match Hamiltonian");
  }
  std::vector<std::pair<SpinConfiguration, double>> out;
  for (const auto& [index, amplitude] : connected_indices(x.to_index())) {
    out.emplace_back(SpinConfiguration::from_index(index, n_qubits_), amplitude);
  }
  return out;
}

void PauliHamiltonian::apply_dense(const double* in, double* out) const {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  std::fill(out, out + dim, 0.0);
  for (const auto& term : compiled_) {
    for (std::uint64_t x = 0; x < dim; ++x) {
      const int parity = std::popcount(term.sign_mask & x) & 1;
      const double amplitude = parity ? -term.base : term.base;
      out[x ^ term.flip_mask] += amplitude * in[x];
    }
  }
}

namespace {

struct Tokenized {
  std::vector<std::string> tokens;
};

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

double parse_coefficient(const std::string& token, int line_number) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    throw ParseError(line_number, "bad coefficient '" + token + "'");
  }
  if (consumed != token.size()) {
    throw ParseError(line_number, "bad coefficient '" + token + "'");
  }
  return value;
}

PauliOperator parse_operator(const std::string& token, int line_number) {
  if (token.size() < 2) {
    throw ParseError(line_number, "bad operator token '" + token + "'");
  }
  PauliAxis axis;
  switch (token[0]) {
    case 'X':
      axis = PauliAxis::X;
      break;
    case 'Y':
      axis = PauliAxis::Y;
      break;
    case 'Z':
      axis = PauliAxis::Z;
      break;
    default:
      throw ParseError(line_number, "bad operator token '" + token + "'");
  }
  for (std::size_t i = 1; i < token.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(token[i]))) {
      throw ParseError(line_number, "bad operator token '" + token + "'");
    }
  }
  return PauliOperator{axis, std::stoi(token.substr(1))};
}

}  // namespace

PauliHamiltonian parse_hamiltonian(std::istream& in) {
  std::string line;
  int line_number = 0;
  int n_qubits = -1;
  std::vector<PauliTerm> terms;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (n_qubits < 0) {
      if (tokens.size() != 2 || tokens[0] != "qubits") {
        throw ParseError(line_number, "expected header 'qubits <n>'");
      }
      try {
        n_qubits = std::stoi(tokens[1]);
      } catch (const std::exception&) {
        throw ParseError(line_number, "bad qubit count '" + tokens[1] + "'");
      }
      if (n_qubits <= 0) {
        throw ParseError(line_number, "qubit count must be positive");
      }
      continue;
    }
    if (tokens.size() < 2) {
      throw ParseError(line_number, "term needs a coefficient and operators");
    }
    PauliTerm term;
    term.coefficient = parse_coefficient(tokens[0], line_number);
    if (tokens.size() == 2 && tokens[1] == "I") {
      terms.push_back(std::move(term));
      continue;
    }
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      if (tokens[i] == "I") {
        throw ParseError(line_number,
                         "identity must be the sole operator of its term");
      }
      term.operators.push_back(parse_operator(tokens[i], line_number));
    }
    try {
      term = normalize_term(std::move(term), n_qubits);
    } catch (const std::invalid_argument& error) {
      throw ParseError(line_number, error.what());
    }
    terms.push_back(std::move(term));
  }
  if (n_qubits < 0) {
    throw ParseError(line_number, "missing 'qubits <n>' header");
  }
  return PauliHamiltonian(n_qubits, std::move(terms));
}

PauliHamiltonian parse_hamiltonian(const std::string& text) {
  std::istringstream stream(text);
  return parse_hamiltonian(stream);
}

PauliHamiltonian load_hamiltonian_file(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw std::runtime_error("cannot open Hamiltonian file: " + path);
  }
  return parse_hamiltonian(stream);
}

std::string serialize_hamiltonian(const PauliHamiltonian& h) {
  std::ostringstream out;
  out << "qubits " << h.n_qubits() << "\n";
  char buffer[32];
  for (const auto& term : h.terms()) {
    std::snprintf(buffer, sizeof buffer, "%.17g", term.coefficient);
    out << buffer;
    if (term.operators.empty()) {
      out << " I";
    } else {
      for (const auto& op : term.operators) {
        out << ' ' << axis_letter(op.axis) << op.qubit;
      }
    }
    out << "\n";
  }
  return out.str();
}

namespace detail {

double smallest_eigenvalue_iterative(const PauliHamiltonian& h) {
  const std::uint64_t dim = std::uint64_t{1} << h.n_qubits();
  const auto idim = static_cast<Eigen::Index>(dim);
  const int max_basis = 64;
  const int max_cycles = 200;
  const double tol = 1e-12;

  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd start(idim);
  for (Eigen::Index i = 0; i < idim; ++i) start(i) = gauss(rng);
  start.normalize();

  double best = 0.0;
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    std::vector<Eigen::VectorXd> basis;
    basis.push_back(start);
    std::vector<double> alpha;
    std::vector<double> beta;
    Eigen::VectorXd work(idim);
    for (int j = 0; j < max_basis; ++j) {
      h.apply_dense(basis.back().data(), work.data());
      alpha.push_back(basis.back().dot(work));
      // Full reorthogonalization, two passes.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : basis) work -= v.dot(work) * v;
      }
      const double norm = work.norm();
      if (norm < 1e-13) break;
      beta.push_back(norm);
      basis.push_back(work / norm);
    }
    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) {
        tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
    const double theta = solver.eigenvalues()(0);
    const Eigen::VectorXd y = solver.eigenvectors().col(0);
    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(idim);
    for (Eigen::Index i = 0; i < k; ++i) {
      ritz += y(i) * basis[static_cast<std::size_t>(i)];
    }
    ritz.normalize();
    // If the Krylov space closed early (beta ran short) the residual is zero.
    const double residual =
        beta.size() >= static_cast<std::size_t>(k)
            ? std::abs(beta[static_cast<std::size_t>(k - 1)] * y(k - 1))
            : 0.0;
    const bool converged =
        cycle > 0 && std::abs(theta - best) <= tol * std::max(1.0, std::abs(theta)) &&
        residual <= 1e-10 * std::max(1.0, std::abs(theta));
    best = theta;
    start = ritz;
    if (converged) break;
  }
  return best;
}

}  // namespace detail

double exact_ground_energy(const PauliHamiltonian& h) {
  const int n = h.n_qubits();
  if (n > 20) {
    throw std::invalid_argument(
        "exact_ground_energy: dimension overflow beyond 20 qubits");
  }
  if (n <= 12) {
    const std::uint64_t dim = std::uint64_t{1} << n;
    const auto idim = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(idim, idim);
    for (std::uint64_t col = 0; col < dim; ++col) {
      for (const auto& [row, amplitude] : h.connected_indices(col)) {
        matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
            amplitude;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix,
                                                          Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
  }
  return detail::smallest_eigenvalue_iterative(h);
}

}  // namespace rbmgs
