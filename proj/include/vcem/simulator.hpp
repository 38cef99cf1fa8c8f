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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vcem/circuit.hpp"
#include "vcem/noise.hpp"
#include "vcem/pauli.hpp"

namespace vcem {

inline constexpr std::size_t kMaxPureQubits = 14;
inline constexpr std::size_t kMaxNoisyQubits = 12;

class StateVector {
 public:
  /// |0...0> on n qubits; throws ResourceLimit above kMaxPureQubits.
  explicit StateVector(std::size_t n);

  std::size_t num_qubits() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  const std::vector<Complex> &amplitudes() const noexcept { return amps_; }
  std::vector<Complex> &amplitudes() noexcept { return amps_; }

  /// exp(-i angle / 2 * P) for a Hermitian Pauli string P.
  void apply_rotation(const PauliString &generator, double angle);
  /// Several commuting diagonal (Z-type) rotations in a single pass.
  void apply_diagonal_rotations(std::span<const PauliString> generators, std::span<const double> angles);
  /// Dense 2^k x 2^k gate on `qubits` (kron order of the list).
  void apply_unitary(const Eigen::MatrixXcd &u, std::span<const int> qubits);

  double norm() const;
  Eigen::VectorXcd to_vector() const;

 private:
  std::size_t n_;
  std::vector<Complex> amps_;
};

/// Row-major 2^n x 2^n density matrix.
class DensityMatrix {
 public:
  /// |0...0><0...0|; throws ResourceLimit above kMaxNoisyQubits.
  explicit DensityMatrix(std::size_t n);
  static DensityMatrix from_pure(const StateVector &psi);
  /// Builds the (not necessarily positive) operator sum_j w_j P_j.
  static DensityMatrix from_pauli_sum(std::size_t n, std::span<const PauliString> paulis,
                                      std::span<const double> weights);

  std::size_t num_qubits() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << n_; }
  Complex operator()(std::size_t r, std::size_t c) const { return data_[(r << n_) | c]; }
  const std::vector<Complex> &data() const noexcept { return data_; }

  /// rho -> U rho U^dagger with U = exp(-i angle / 2 * P).
  void apply_rotation(const PauliString &generator, double angle);
  void apply_diagonal_rotations(std::span<const PauliString> generators, std::span<const double> angles);
  void apply_unitary(const Eigen::MatrixXcd &u, std::span<const int> qubits);

  void apply_channel(const PauliChannel &ch);
  void apply_channel(const DepolarizingChannel &ch);
  void apply_channel(const Channel &ch);

  Complex trace() const;
  /// max |rho - rho^dagger|.
  double hermiticity_error() const;
  /// Dense copy, n <= 8.
  Eigen::MatrixXcd to_matrix() const;

 private:
  std::size_t n_;
  std::vector<Complex> data_;
};

/// <psi|s|psi>, real part; s may carry a sign.
double expectation(const StateVector &psi, const PauliString &s);
/// Re Tr(s rho).
double expectation(const DensityMatrix &rho, const PauliString &s);
/// Tr(o p rho) for Hermitian o and rho.
Complex trace_product(const DensityMatrix &o, const PauliString &p, const DensityMatrix &rho);
/// The same for several strings in one sweep over the matrices.
std::vector<Complex> trace_products(const DensityMatrix &o, std::span<const PauliString> ps, const DensityMatrix &rho);

/// Full rotation angle of every gate in flat order: clifford + theta + epsilon.
std::vector<double> gate_angles(const ParamCircuit &c, std::span<const double> theta);

/// Applies moment q with the given flat angle table.
void apply_moment(StateVector &psi, const ParamCircuit &c, std::size_t q, std::span<const double> angles);
void apply_moment(DensityMatrix &rho, const ParamCircuit &c, std::size_t q, std::span<const double> angles);
/// Inverse of apply_moment (U^dagger, or U^dagger rho U).
void unapply_moment(StateVector &psi, const ParamCircuit &c, std::size_t q, std::span<const double> angles);
void unapply_moment(DensityMatrix &rho, const ParamCircuit &c, std::size_t q, std::span<const double> angles);

StateVector run_pure(const ParamCircuit &c, std::span<const double> theta);
StateVector run_pure_angles(const ParamCircuit &c, std::span<const double> angles);

/// Alternates moment q and its channels, for q = 0 .. M-1.
DensityMatrix run_noisy(const ParamCircuit &c, std::span<const double> theta, const NoiseLayout &layout);
DensityMatrix run_noisy_angles(const ParamCircuit &c, std::span<const double> angles, const NoiseLayout &layout);

}  // namespace vcem
