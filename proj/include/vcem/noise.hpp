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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vcem/circuit.hpp"
#include "vcem/clifford.hpp"
#include "vcem/pauli.hpp"

namespace vcem {

/// Terms below this weight are dropped when channels are composed.
inline constexpr double kCompositionPruneThreshold = 1e-15;

struct ChannelTerm {
  double probability;
  /// Letters on the channel's support (size == support.size()), prefactor +1.
  PauliString pauli;
};

/**
 * Pauli channel rho -> sum_j p_j P_j rho P_j on an n-qubit register. Terms are
 * stored on the (usually small) support and embedded into the register on
 * demand.
 */
class PauliChannel {
 public:
  PauliChannel() = default;
  /// Validates and canonicalizes: duplicate letters merge, signs are dropped,
  /// support is sorted and an identity term is always present.
  PauliChannel(std::size_t n, std::vector<int> support, std::vector<ChannelTerm> terms);

  static PauliChannel identity(std::size_t n);
  /// Builds from full-register labels, e.g. {{0.55, "II"}, {0.2, "ZI"}, ...}.
  static PauliChannel from_labels(const std::vector<std::pair<double, std::string>> &terms);

  std::size_t num_qubits() const noexcept { return n_; }
  const std::vector<int> &support() const noexcept { return support_; }
  const std::vector<ChannelTerm> &terms() const noexcept { return terms_; }

  double identity_probability() const;
  /// Probability of the term with the given full-register letters (0 if absent).
  double probability_of(const PauliString &full) const;
  /// Terms embedded on the full register.
  std::vector<ChannelTerm> full_terms() const;
  /// Throws InvalidArgument unless p_0 >= 1/2.
  void require_weak() const;

 private:
  std::size_t n_ = 0;
  std::vector<int> support_;
  std::vector<ChannelTerm> terms_;
};

/// rho -> (1 - p) rho + p 1 / 2^n.
struct DepolarizingChannel {
  std::size_t n = 0;
  double p = 0;

  void validate() const;
};

using Channel = std::variant<PauliChannel, DepolarizingChannel>;

/// Channels applied after each moment, aligned with a ParamCircuit.
struct NoiseLayout {
  std::vector<std::vector<Channel>> moments;

  static NoiseLayout noiseless(std::size_t num_moments);
  std::size_t num_moments() const noexcept { return moments.size(); }
  bool all_pauli() const;
  bool empty() const;
  /// Throws SizeMismatch when misaligned with `c`.
  void check_aligned(const ParamCircuit &c) const;
};

/// Kraus-form channel on n <= 2 qubits.
struct GenericChannel {
  std::size_t n = 0;
  std::vector<Eigen::MatrixXcd> kraus;

  /// Throws InvalidArgument unless sum_j E_j^dagger E_j = 1 within 1e-10.
  void validate() const;

  static GenericChannel amplitude_damping(double gamma);
  static GenericChannel from_pauli(const PauliChannel &ch);
  static GenericChannel unitary(const Eigen::MatrixXcd &u);
};

/// 1 - 2 Gamma with Gamma the total weight of terms anticommuting with s.
double chi_factor(const PauliChannel &ch, const PauliString &s);
double chi_factor(const DepolarizingChannel &ch, const PauliString &s);
double chi_factor(const Channel &ch, const PauliString &s);

/// Explicit expansion on n <= 3 qubits.
PauliChannel depolarizing_as_pauli(const DepolarizingChannel &d);

/// 1 - prod_q (1 - p_q).
double compose_depolarizing(std::span<const double> ps);

/// Convolution of the term distributions (both channels act, order irrelevant).
PauliChannel compose(const PauliChannel &a, const PauliChannel &b);

/// Terms P_j -> U P_j U^dagger with signs absorbed.
PauliChannel conjugate_channel(const PauliChannel &ch, const CliffordMap &u);
/// Dense conjugator on n <= 4 qubits; throws InvalidArgument when not Clifford.
PauliChannel conjugate_channel(const PauliChannel &ch, const Eigen::MatrixXcd &u);

/// Single end-of-circuit channel: a Pauli part composed with a global
/// depolarizing part (which is invariant under conjugation).
struct EndChannel {
  PauliChannel pauli;
  double depolarizing = 0;

  double chi(const PauliString &s) const;
};

/// Conjugates each moment's channels through the Clifford parts of all later
/// moments and composes the results. `moment_cliffords[q]` is the Clifford part
/// of moment q.
EndChannel effective_end_channel(const NoiseLayout &layout, std::span<const CliffordMap> moment_cliffords);
EndChannel effective_end_channel(const NoiseLayout &layout, const ParamCircuit &c);

/// chi_i of the effective end channel for each s_i, obtained by pulling s_i back
/// through the Clifford parts instead of materializing the channel. Scales to
/// any register size.
std::vector<double> effective_chi_factors(const NoiseLayout &layout, const ParamCircuit &c,
                                          std::span<const PauliString> observables);

/// Pauli twirl: p_k = sum_j |c_{j,k}|^2 with c_{j,k} the Pauli coefficients of E_j.
PauliChannel pauli_twirl(const GenericChannel &g);

/// Exhaustive twirl over the 24-element single-qubit Clifford group.
DepolarizingChannel clifford_twirl(const GenericChannel &g);

/// The 24 single-qubit Cliffords modulo global phase.
std::vector<Eigen::Matrix2cd> single_qubit_cliffords();

/// Superoperator on row-major vec(rho): S = sum_j E_j (x) conj(E_j).
Eigen::MatrixXcd superoperator(const GenericChannel &g);
/// Group average (1/|G|) sum_U U^dagger E(U rho U^dagger) U as a superoperator.
Eigen::MatrixXcd twirl_superoperator(const Eigen::MatrixXcd &superop, std::span<const Eigen::MatrixXcd> group);
/// Process (chi) matrix in the Pauli basis: E(rho) = sum_kl chi_kl P_k rho P_l.
Eigen::MatrixXcd process_matrix(const Eigen::MatrixXcd &superop, std::size_t n);
/// Largest |chi_kl| with k != l.
double off_diagonal_residual(const Eigen::MatrixXcd &chi);

/// Random m-local channel on `support` (1 or 2 qubits of an n-qubit register):
/// each non-identity weight ~ U[0, magnitude], identity takes the remainder.
/// Throws InvalidArgument when p_0 < 1/2.
PauliChannel sample_pauli_channel(std::size_t n, std::span<const int> support, double magnitude, std::uint64_t seed);

/// Parsed form of "none", "depol:p=0.2", "pauli:m=1,mag=0.01" (m = 1, 2 or 1+2),
/// optionally prefixed with "end:" to act only after the final moment.
struct NoiseSpec {
  enum class Kind { None, Depolarizing, Pauli } kind = Kind::None;
  bool end_only = false;
  double p = 0;
  double magnitude = 0;
  bool one_local = false;
  bool two_local = false;

  std::string to_string() const;
};

NoiseSpec parse_noise_spec(const std::string &spec);

/// Materializes a spec on a circuit. Pauli channels: a 1-local channel on every
/// qubit and/or a 2-local channel on every Rzx pair of the moment. Each channel
/// is seeded from (seed, moment, support); draws violating p_0 >= 1/2 are redrawn
/// up to 64 times before failing.
NoiseLayout build_noise_layout(const NoiseSpec &spec, const ParamCircuit &c, std::uint64_t seed);

}  // namespace vcem
