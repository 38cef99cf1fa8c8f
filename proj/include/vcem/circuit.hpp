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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vcem/pauli.hpp"

namespace vcem {

// ---------------------------------------------------------------------------
// Abstract (Clifford) circuits built from graphs, before transpilation.
// ---------------------------------------------------------------------------

enum class AbstractGateKind { H, CZ, CNOT };

struct AbstractGate {
  AbstractGateKind kind;
  std::vector<int> qubits;
};

struct AbstractCircuit {
  std::size_t n = 0;
  /// Layers of gates with pairwise-disjoint support.
  std::vector<std::vector<AbstractGate>> layers;

  std::size_t num_gates() const;
};

/// One H per qubit, then one CZ per edge packed first-fit into disjoint layers.
AbstractCircuit build_graph_circuit(const Graph &g);

/// H on qubit 0 followed by the CNOT chain (i, i+1).
AbstractCircuit build_ghz_circuit(std::size_t n);

// ---------------------------------------------------------------------------
// Native parametrized circuits.
// ---------------------------------------------------------------------------

enum class GateKind { Rz, Rx, Rzx };

const char *gate_kind_name(GateKind kind);

/// `exp(-i (clifford_angle + theta + epsilon) / 2 * P)` with P = Z, X or Z (x) X.
struct NativeGate {
  GateKind kind;
  std::vector<int> qubits;
  /// Clifford offset, a multiple of pi/2.
  double clifford_angle = 0;
  /// Index into ParamCircuit::param_keys.
  std::size_t param = 0;

  /// Generator on the gate's own support (size 1 or 2).
  PauliString local_generator() const;
  /// Generator embedded in an n-qubit register.
  PauliString generator(std::size_t n) const;
  /// clifford_angle in quarter turns, reduced mod 4.
  int quarter_turns() const;
};

struct Moment {
  std::vector<NativeGate> gates;
};

/// Where a single gate occurrence sits in a circuit.
struct GateRef {
  std::size_t moment;
  std::size_t index;
};

/**
 * A moment-structured circuit of native rotations with shared variational
 * slots. Each parameter key carries a frozen coherent error; a gate's total
 * angle is `clifford_angle + theta[param] + epsilons[param]`.
 */
class ParamCircuit {
 public:
  ParamCircuit() = default;
  explicit ParamCircuit(std::size_t n) : n_(n) {}

  std::size_t num_qubits() const noexcept { return n_; }
  std::size_t num_params() const noexcept { return param_keys_.size(); }
  std::size_t num_moments() const noexcept { return moments_.size(); }
  std::size_t num_gates() const noexcept { return gate_refs_.size(); }

  const std::vector<Moment> &moments() const noexcept { return moments_; }
  const std::vector<std::string> &param_keys() const noexcept { return param_keys_; }
  const std::vector<GateKind> &param_families() const noexcept { return param_families_; }
  const std::vector<double> &epsilons() const noexcept { return epsilons_; }

  /// Flat gate order: moment by moment, gates in moment order.
  const std::vector<GateRef> &gate_refs() const noexcept { return gate_refs_; }
  const NativeGate &gate(std::size_t flat_index) const;

  /// Index of `key`, registering it when absent.
  std::size_t intern_key(const std::string &key, GateKind family);
  std::optional<std::size_t> find_key(const std::string &key) const;

  /// Appends a moment; throws if the gate supports overlap or angles are not Clifford.
  void add_moment(Moment moment);

  void set_epsilons(std::vector<double> epsilons);
  std::map<std::string, double> epsilon_map() const;

  /// Seed the coherent errors were drawn with, if any (recorded in manifests).
  std::optional<std::uint64_t> coherent_seed;

  /// Re-checks every structural invariant.
  void validate() const;

 private:
  std::size_t n_ = 0;
  std::vector<Moment> moments_;
  std::vector<std::string> param_keys_;
  std::vector<GateKind> param_families_;
  std::vector<double> epsilons_;
  std::vector<GateRef> gate_refs_;
};

/// Sharing-rule key: "Rz:q", "Rx:q" or "Rzx:a-b".
std::string param_key_for(GateKind kind, std::span<const int> qubits);

/// Lowers H / CZ / CNOT into {Rz, Rx, Rzx} with shared parameter keys.
ParamCircuit transpile(const AbstractCircuit &c);

/// Dense unitary on the gate's own support (kron order of `g.qubits`).
Eigen::MatrixXcd gate_unitary(const NativeGate &g, double theta, double epsilon);

/// Dense unitary of a whole abstract circuit, n <= 10.
Eigen::MatrixXcd dense_unitary(const AbstractCircuit &c);

/// Dense unitary of the native circuit at the given parameters, n <= 10.
/// Epsilons are taken from the circuit.
Eigen::MatrixXcd dense_unitary(const ParamCircuit &c, std::span<const double> theta);

/// One uniform draw in [-magnitude, magnitude] per parameter key. Each key's
/// draw depends only on (seed, key), so identical keys in different circuits
/// receive identical errors and the draw scales linearly with magnitude.
std::vector<double> sample_coherent_errors(const ParamCircuit &c, double magnitude, std::uint64_t seed);

/// Parses "line:N", "grid:RxC" or a path to an edge-list file ("u v" per line).
Graph parse_graph_spec(const std::string &spec);

}  // namespace vcem
