// Copyright 2026 The vcem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force dense reference implementations shared by the unit tests. They
// deliberately avoid the library's bit-twiddling kernels: every operator is a
// full 2^n x 2^n matrix built from Kronecker products.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vcem/circuit.hpp"
#include "vcem/noise.hpp"
#include "vcem/pauli.hpp"

namespace vcem::testing {

inline Eigen::Matrix2cd letter_matrix(char c) {
  const std::complex<double> i(0, 1);
  Eigen::Matrix2cd m;
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

/// Dense matrix of a Pauli string from its letters and prefactor.
inline Eigen::MatrixXcd dense_pauli(const PauliString &p) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = 0; q < p.size(); ++q) m = kron(m, letter_matrix(p.letter(q)));
  return p.phase_factor() * m;
}

inline Eigen::MatrixXcd dense_rotation(const PauliString &generator, double angle) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << generator.size());
  return std::cos(angle / 2) * Eigen::MatrixXcd::Identity(d, d) -
         std::complex<double>(0, 1) * std::sin(angle / 2) * dense_pauli(generator);
}

/// Product of every native gate at clifford + theta + epsilon.
inline Eigen::MatrixXcd dense_circuit(const ParamCircuit &c, const std::vector<double> &theta) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << c.num_qubits());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
  for (const auto &m : c.moments())
    for (const auto &g : m.gates)
      u = dense_rotation(g.generator(c.num_qubits()), g.clifford_angle + theta[g.param] + c.epsilons()[g.param]) * u;
  return u;
}

inline Eigen::MatrixXcd apply_dense_channel(const Channel &ch, const Eigen::MatrixXcd &rho) {
  if (const auto *d = std::get_if<DepolarizingChannel>(&ch)) {
    const auto dim = rho.rows();
    return (1 - d->p) * rho + d->p * rho.trace() * Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto &t : std::get<PauliChannel>(ch).full_terms()) {
    const Eigen::MatrixXcd p = dense_pauli(t.pauli);
    out += t.probability * p * rho * p.adjoint();
  }
  return out;
}

/// Interleaved moment / channel evolution of |0..0><0..0| with dense matrices.
inline Eigen::MatrixXcd dense_noisy(const ParamCircuit &c, const std::vector<double> &theta, const NoiseLayout &layout) {
  const std::size_t n = c.num_qubits();
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  rho(0, 0) = 1;
  for (std::size_t q = 0; q < c.num_moments(); ++q) {
    for (const auto &g : c.moments()[q].gates) {
      const auto u = dense_rotation(g.generator(n), g.clifford_angle + theta[g.param] + c.epsilons()[g.param]);
      rho = u * rho * u.adjoint();
    }
    for (const auto &ch : layout.moments[q]) rho = apply_dense_channel(ch, rho);
  }
  return rho;
}

inline double dense_expectation(const Eigen::MatrixXcd &rho, const PauliString &s) {
  return (dense_pauli(s) * rho).trace().real();
}

inline std::vector<double> random_vector(std::mt19937_64 &rng, std::size_t k, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(k);
  for (auto &x : v) x = u(rng);
  return v;
}

/// Erdos-Renyi graph; every edge is kept with probability `p`.
inline Graph random_graph(std::mt19937_64 &rng, std::size_t n, double p) {
  std::bernoulli_distribution keep(p);
  Graph g;
  g.n = n;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (keep(rng)) g.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  return g;
}

/// |Tr(U^dagger V)| / dim, equal to 1 iff U and V agree up to a global phase.
inline double phase_overlap(const Eigen::MatrixXcd &u, const Eigen::MatrixXcd &v) {
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

}  // namespace vcem::testing
