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
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vcem/circuit.hpp"
#include "vcem/noise.hpp"
#include "vcem/pauli.hpp"

namespace vcem {

struct CostReport {
  double total = 0;
  /// C_i = -<S_i> (or its noisy / rescaled counterpart).
  std::vector<double> per_stabilizer;
  std::vector<double> theta;
};

struct ValueAndGradient {
  double value = 0;
  std::vector<double> gradient;
};

enum class GradientMethod {
  /// +-pi/2 shift of every gate occurrence, summed per key.
  ParameterShift,
  /// Reverse-mode sweep through the stored forward states.
  Adjoint,
};

/**
 * A cost function of the circuit parameters. Implementations evaluate the cost
 * from a flat table of full gate angles, which is what makes per-occurrence
 * parameter shifts possible for shared keys.
 */
class CostEvaluator {
 public:
  virtual ~CostEvaluator() = default;

  virtual const ParamCircuit &circuit() const = 0;
  virtual const StabilizerSet &stabilizers() const = 0;
  virtual CostReport report_angles(std::span<const double> angles) const = 0;

  /// False for evaluators whose gates are not half-angle Pauli rotations.
  virtual bool pauli_generators() const { return true; }

  CostReport report(std::span<const double> theta) const;
  double value(std::span<const double> theta) const { return report(theta).total; }

  /// Gradient with respect to theta using the evaluator's configured method.
  virtual std::vector<double> gradient(std::span<const double> theta) const;
  /// Both at once; adjoint implementations share a single forward pass.
  virtual ValueAndGradient value_and_gradient(std::span<const double> theta) const;

  GradientMethod method = GradientMethod::ParameterShift;
};

/// Noiseless statevector cost.
class PureCost final : public CostEvaluator {
 public:
  PureCost(ParamCircuit c, StabilizerSet stabs);
  const ParamCircuit &circuit() const override { return c_; }
  const StabilizerSet &stabilizers() const override { return stabs_; }
  CostReport report_angles(std::span<const double> angles) const override;
  std::vector<double> gradient(std::span<const double> theta) const override;
  ValueAndGradient value_and_gradient(std::span<const double> theta) const override;

 private:
  ParamCircuit c_;
  StabilizerSet stabs_;
};

/// Cost of the full interleaved density-matrix simulation.
class NoisyCost final : public CostEvaluator {
 public:
  NoisyCost(ParamCircuit c, NoiseLayout layout, StabilizerSet stabs);
  const ParamCircuit &circuit() const override { return c_; }
  const StabilizerSet &stabilizers() const override { return stabs_; }
  const NoiseLayout &layout() const { return layout_; }
  CostReport report_angles(std::span<const double> angles) const override;
  std::vector<double> gradient(std::span<const double> theta) const override;
  ValueAndGradient value_and_gradient(std::span<const double> theta) const override;

 private:
  ParamCircuit c_;
  NoiseLayout layout_;
  StabilizerSet stabs_;
};

/// sum_i chi_i C_i(theta) with the noiseless C_i; the channel is never simulated.
class ChiScaledCost final : public CostEvaluator {
 public:
  ChiScaledCost(ParamCircuit c, std::vector<double> chi, StabilizerSet stabs);
  ChiScaledCost(ParamCircuit c, const PauliChannel &end_channel, StabilizerSet stabs);
  const ParamCircuit &circuit() const override { return c_; }
  const StabilizerSet &stabilizers() const override { return stabs_; }
  const std::vector<double> &chi() const { return chi_; }
  CostReport report_angles(std::span<const double> angles) const override;
  std::vector<double> gradient(std::span<const double> theta) const override;

 private:
  ParamCircuit c_;
  std::vector<double> chi_;
  StabilizerSet stabs_;
};

/// Noisy cost minus its effective end-channel prediction. Requires Pauli channels.
class DeltaCost final : public CostEvaluator {
 public:
  DeltaCost(ParamCircuit c, NoiseLayout layout, StabilizerSet stabs);
  const ParamCircuit &circuit() const override { return c_; }
  const StabilizerSet &stabilizers() const override { return stabs_; }
  const std::vector<double> &chi() const { return chi_; }
  CostReport report_angles(std::span<const double> angles) const override;
  std::vector<double> gradient(std::span<const double> theta) const override;

 private:
  ParamCircuit c_;
  NoiseLayout layout_;
  StabilizerSet stabs_;
  std::vector<double> chi_;
};

CostReport cost(const ParamCircuit &c, std::span<const double> theta, const StabilizerSet &stabs);
CostReport noisy_cost(const ParamCircuit &c, std::span<const double> theta, const NoiseLayout &layout,
                      const StabilizerSet &stabs);
CostReport chi_scaled_cost(const ParamCircuit &c, std::span<const double> theta, const PauliChannel &end_channel,
                           const StabilizerSet &stabs);
double delta_cost(const ParamCircuit &c, std::span<const double> theta, const NoiseLayout &layout,
                  const StabilizerSet &stabs);

/// Exact parameter-shift gradient; throws InvalidArgument for non-Pauli generators.
std::vector<double> parameter_shift_gradient(const CostEvaluator &f, std::span<const double> theta);

/// Reverse-mode gradient of sum_i w_i Tr(O_i rho(theta)) through the noisy
/// evolution. States are stored per moment, falling back to checkpointing when
/// they exceed `memory_budget_bytes`.
ValueAndGradient adjoint_gradient_noisy(const ParamCircuit &c, std::span<const double> theta,
                                        const NoiseLayout &layout, std::span<const PauliString> observables,
                                        std::span<const double> weights,
                                        std::size_t memory_budget_bytes = std::size_t{1} << 31);

/// Statevector form of the same sweep for noiseless circuits.
ValueAndGradient adjoint_gradient_pure(const ParamCircuit &c, std::span<const double> theta,
                                       std::span<const PauliString> observables, std::span<const double> weights);

using ScalarFunction = std::function<double(std::span<const double>)>;

std::vector<double> finite_difference_gradient(const ScalarFunction &f, std::span<const double> theta,
                                               double step = 1e-5);

/// Central-difference Hessian, symmetrized.
Eigen::MatrixXd hessian_fd(const ScalarFunction &f, std::span<const double> theta, double step = 1e-4);

double euclidean_norm(std::span<const double> v);

}  // namespace vcem
