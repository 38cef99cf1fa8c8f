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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vcem {

using Complex = std::complex<double>;

/**
 * An n-qubit Pauli operator `i^phase * P_0 (x) P_1 (x) ... (x) P_{n-1}` where each
 * letter P_q is one of I, X, Y, Z.
 *
 * Letters are stored in symplectic form: bit q of `xs` / `zs` is set when the
 * letter on qubit q has an X / Z component (Y has both). The prefactor is kept
 * separately as a power of i, so Y is the Hermitian Pauli Y and not iXZ.
 */
class PauliString {
 public:
  PauliString() = default;
  /// Identity string on n qubits.
  explicit PauliString(std::size_t n);

  /// Parses labels such as "XZI", "-ZZ", "+iXY" or "-iYY". Character q is qubit q.
  static PauliString from_label(std::string_view label);
  /// Identity everywhere except `letter` on qubit q.
  static PauliString single(std::size_t n, std::size_t q, char letter);

  std::size_t size() const noexcept { return n_; }
  /// Power of i in the prefactor, in [0, 4).
  std::uint8_t phase() const noexcept { return phase_; }
  void set_phase(std::uint8_t phase) noexcept { phase_ = phase & 3u; }
  Complex phase_factor() const noexcept;

  bool x(std::size_t q) const noexcept { return (xs_[q >> 6] >> (q & 63)) & 1u; }
  bool z(std::size_t q) const noexcept { return (zs_[q >> 6] >> (q & 63)) & 1u; }
  char letter(std::size_t q) const noexcept;
  void set_letter(std::size_t q, char letter);

  /// True when every letter is I (the prefactor is not inspected).
  bool is_identity_letters() const noexcept;
  /// True for the identity with prefactor +1.
  bool is_identity() const noexcept { return phase_ == 0 && is_identity_letters(); }
  bool is_hermitian() const noexcept { return (phase_ & 1u) == 0; }
  std::size_t weight() const noexcept;
  /// Qubits carrying a non-identity letter, ascending.
  std::vector<int> support() const;

  /// Same letters, ignoring the prefactor.
  bool same_letters(const PauliString &other) const noexcept;

  /// The sub-string on `qubits` (in that order); prefactor is kept.
  PauliString restricted(std::span<const int> qubits) const;
  /// Places this k-qubit string on `support` of an n-qubit register.
  PauliString embedded(std::size_t n, std::span<const int> support) const;

  /// Bit masks over basis-state indices (qubit q maps to bit n-1-q). Requires n <= 62.
  std::uint64_t basis_x_mask() const;
  std::uint64_t basis_z_mask() const;
  /// Number of Y letters.
  std::size_t y_count() const noexcept;

  std::span<const std::uint64_t> x_words() const noexcept { return xs_; }
  std::span<const std::uint64_t> z_words() const noexcept { return zs_; }

  /// Label with sign prefix: "", "i", "-", "-i".
  std::string label() const;
  /// Letters only, no prefix.
  std::string letters() const;

  bool operator==(const PauliString &other) const noexcept = default;

  /// Hash of the letters (prefactor ignored).
  std::size_t letters_hash() const noexcept;

  friend PauliString multiply(const PauliString &p, const PauliString &q);

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> xs_;
  std::vector<std::uint64_t> zs_;
  std::uint8_t phase_ = 0;
};

/// True iff pq = qp; Pauli strings otherwise anticommute.
bool commutes(const PauliString &p, const PauliString &q);

/// The product pq with its exact phase.
PauliString multiply(const PauliString &p, const PauliString &q);

inline PauliString operator*(const PauliString &p, const PauliString &q) { return multiply(p, q); }

/// Dense 2^n x 2^n matrix of p in kron order (qubit 0 leftmost).
Eigen::MatrixXcd to_dense(const PauliString &p);

/// All 4^k Pauli strings on k qubits with prefactor +1, ordered as base-4 digits
/// over (I, X, Y, Z) with qubit 0 most significant.
std::vector<PauliString> all_pauli_strings(std::size_t k);

/// Simple undirected graph on nodes 0..n-1.
struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<int, int>> edges;

  /// Throws InvalidArgument on self-loops, duplicates or out-of-range nodes.
  void validate() const;
  std::vector<int> neighbors(int node) const;

  static Graph line(std::size_t n);
  /// rows x cols rectangular lattice; node index r * cols + c.
  static Graph grid(std::size_t rows, std::size_t cols);
};

/// Generating set of a stabilizer group.
struct StabilizerSet {
  std::vector<PauliString> generators;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return generators.size(); }
  std::size_t num_qubits() const noexcept { return generators.empty() ? 0 : generators.front().size(); }

  /// Checks that generators are Hermitian with phase +1, mutually commute,
  /// and are independent (full GF(2) rank). Throws InvalidArgument otherwise.
  void validate() const;
};

/// Rank over GF(2) of the symplectic (x|z) rows of `strings`.
std::size_t symplectic_rank(std::span<const PauliString> strings);

/// Generator i is X on node i and Z on every neighbour of i.
StabilizerSet graph_stabilizers(const Graph &g);

/// {X...X, ZZI..., IZZI..., ...} for n >= 2.
StabilizerSet ghz_stabilizers(std::size_t n);

struct PauliTerm {
  Complex coefficient;
  PauliString pauli;
};

/// Expands a 2^k x 2^k matrix (k <= 4) as sum_j c_j P_j with c_j = Tr(P_j m) / 2^k.
/// Terms with |c_j| <= 1e-14 are dropped.
std::vector<PauliTerm> decompose(const Eigen::MatrixXcd &m);

/// Re-sums decomposition terms into a dense matrix on k qubits.
Eigen::MatrixXcd resum(std::span<const PauliTerm> terms, std::size_t k);

}  // namespace vcem
