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

// Closed-form costs of the two-qubit GHZ circuit (H on qubit 0, then a
// parametrized CNOT) under four noise scenarios, together with independent
// density-matrix simulations of the same scenarios.

#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "vcem/noise.hpp"

namespace vcem::ghz {

enum class Variant { Noiseless, EndPauli, PerMomentDepol, PerMomentPauli };

const char *variant_name(Variant v);
/// Accepts "noiseless", "end_pauli", "per_moment_depol", "per_moment_pauli".
Variant parse_variant(const std::string &name);

/// p0..p6 for {II, XX, ZZ, ZI, IZ, XI, IX}.
using EndPauliProbs = std::array<double, 7>;

/// First-moment channel on qubit 0 {I, Z, X, Y} and second-moment channel
/// {II, ZI, IZ, XI, IX}.
struct MomentPauliProbs {
  std::array<double, 4> first;
  std::array<double, 5> second;
};

EndPauliProbs default_end_probs();
MomentPauliProbs default_moment_probs();
inline constexpr double kDefaultDepolarizing = 0.2;

struct Scenario {
  double theta = 0;
  double epsilon = 0;
  Variant variant = Variant::Noiseless;
  EndPauliProbs end_probs = default_end_probs();
  double depolarizing = kDefaultDepolarizing;
  MomentPauliProbs moment_probs = default_moment_probs();
};

/// -sin(a) - sin^2(a) with a = (pi + theta + epsilon) / 2.
double cost_noiseless(double theta, double epsilon);
/// d/dtheta of cost_noiseless.
double cost_noiseless_derivative(double theta, double epsilon);
double cost_end_pauli(double theta, double epsilon, const EndPauliProbs &p);
/// (1 - p)^2 times the noiseless cost (two moments).
double cost_depol(double theta, double epsilon, double p);

/// The twelve products p0..p11 of the composed end channel, in the order
/// {II, ZI, IZ, XI, IX, YI, ZZ, XX, YY, ZX, XY, YX}.
std::array<double, 12> effective_probabilities(const MomentPauliProbs &probs);
/// (1 - Gamma1 - Gamma2) * (-2 sin^2 a) with the exponential CNOT parametrization.
double cost_moment_pauli(double theta, double epsilon, const MomentPauliProbs &probs);

double analytic_cost(const Scenario &s);

/// diag(1, i Rx(phi)) in block form: qubit 0 controls.
Eigen::Matrix4cd ucx(double phi);
/// exp(-i phi H_CX) = diag(1, e^{i phi / 2} Rx(phi)).
Eigen::Matrix4cd ucx_exponential(double phi);

PauliChannel end_channel(const EndPauliProbs &p);
PauliChannel first_moment_channel(const MomentPauliProbs &p);
PauliChannel second_moment_channel(const MomentPauliProbs &p);
/// Both moment channels pushed to the end of the circuit (first one conjugated by CNOT).
PauliChannel effective_channel(const MomentPauliProbs &p);

/// Full density-matrix simulation of the scenario.
double simulated_cost(const Scenario &s);
/// Simulated noisy cost minus the effective end-channel prediction
/// (per_moment_pauli only).
double simulated_delta(const Scenario &s);

}  // namespace vcem::ghz
