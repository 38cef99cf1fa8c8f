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
#include <vector>

#include <Eigen/Dense>

#include "vcem/circuit.hpp"
#include "vcem/pauli.hpp"

namespace vcem {

/// U P U^dagger for U = exp(-i k pi/4 G), i.e. a Pauli rotation by k quarter turns.
PauliString conjugate_by_rotation(const PauliString &p, const PauliString &generator, int quarter_turns);

/**
 * Tableau of a Clifford unitary U: the images U X_q U^dagger and U Z_q U^dagger
 * of every single-qubit generator, with signs.
 */
class CliffordMap {
 public:
  explicit CliffordMap(std::size_t n = 0);

  /// Extracts the tableau of a dense unitary on n <= 4 qubits. Throws
  /// InvalidArgument when some generator does not map to a single Pauli string.
  static CliffordMap from_unitary(const Eigen::MatrixXcd &u);

  static CliffordMap hadamard(std::size_t n, int q);
  static CliffordMap cz(std::size_t n, int a, int b);
  static CliffordMap cnot(std::size_t n, int control, int target);

  std::size_t num_qubits() const noexcept { return x_images_.size(); }

  /// Composes a rotation applied after the current map.
  void append_rotation(const PauliString &generator, int quarter_turns);
  /// Composes `later` after the current map.
  void append(const CliffordMap &later);

  /// U p U^dagger, phase included.
  PauliString conjugate(const PauliString &p) const;

  const PauliString &x_image(std::size_t q) const { return x_images_[q]; }
  const PauliString &z_image(std::size_t q) const { return z_images_[q]; }

  bool operator==(const CliffordMap &other) const = default;

 private:
  std::vector<PauliString> x_images_;
  std::vector<PauliString> z_images_;
};

/// Tableau of the Clifford parts (clifford_angle only) of moments [first, last).
CliffordMap clifford_part(const ParamCircuit &c, std::size_t first, std::size_t last);

/// U^dagger s U where U is the Clifford part of moments [first, last).
PauliString heisenberg_through(const ParamCircuit &c, std::size_t first, std::size_t last, const PauliString &s);

}  // namespace vcem
