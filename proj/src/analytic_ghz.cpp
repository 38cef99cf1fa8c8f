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

#include "vcem/analytic_ghz.hpp"

#include <cmath>
#include <numbers>

#include "vcem/clifford.hpp"
#include "vcem/error.hpp"
#include "vcem/simulator.hpp"

namespace vcem::ghz {

namespace {

constexpr Complex kI{0, 1};
constexpr std::array<int, 2> kBoth{0, 1};
constexpr std::array<int, 1> kFirst{0};

double half_angle(double theta, double epsilon) { return (std::numbers::pi + theta + epsilon) / 2; }

template <std::size_t N>
void check_distribution(const std::array<double, N> &p, const char *what) {
  double total = 0;
  for (double v : p) {
    require(std::isfinite(v) && v >= 0 && v <= 1, ErrorKind::InvalidArgument, std::string(what) + ": invalid probability");
    total += v;
  }
  require(std::abs(total - 1) < 1e-9, ErrorKind::InvalidArgument, std::string(what) + ": probabilities must sum to 1");
}

Eigen::Matrix2cd rx(double phi) {
  Eigen::Matrix2cd m;
  m << std::cos(phi / 2), -kI * std::sin(phi / 2), -kI * std::sin(phi / 2), std::cos(phi / 2);
  return m;
}

Eigen::Matrix4cd controlled(const Eigen::Matrix2cd &lower) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  u(0, 0) = 1;
  u(1, 1) = 1;
  u.block<2, 2>(2, 2) = lower;
  return u;
}

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

double stabilizer_cost(const DensityMatrix &rho, double chi_xx = 1, double chi_zz = 1) {
  return -chi_xx * expectation(rho, PauliString::from_label("XX")) -
         chi_zz * expectation(rho, PauliString::from_label("ZZ"));
}

}  // namespace

const char *variant_name(Variant v) {
  switch (v) {
    case Variant::Noiseless: return "noiseless";
    case Variant::EndPauli: return "end_pauli";
    case Variant::PerMomentDepol: return "per_moment_depol";
    case Variant::PerMomentPauli: return "per_moment_pauli";
  }
  return "?";
}

Variant parse_variant(const std::string &name) {
  for (Variant v : {Variant::Noiseless, Variant::EndPauli, Variant::PerMomentDepol, Variant::PerMomentPauli}) {
    if (name == variant_name(v)) return v;
  }
  fail(ErrorKind::Config, "unknown GHZ variant '" + name + "'");
}

EndPauliProbs default_end_probs() { return {0.55, 0.01, 0.02, 0.2, 0.2, 0.01, 0.01}; }

MomentPauliProbs default_moment_probs() { return {{0.80, 0.01, 0.02, 0.17}, {0.70, 0.01, 0.1, 0.18, 0.01}}; }

double cost_noiseless(double theta, double epsilon) {
  const double s = std::sin(half_angle(theta, epsilon));
  return -s - s * s;
}

double cost_noiseless_derivative(double theta, double epsilon) {
  const double a = half_angle(theta, epsilon);
  return -0.5 * std::cos(a) - std::sin(a) * std::cos(a);
}

double cost_end_pauli(double theta, double epsilon, const EndPauliProbs &p) {
  check_distribution(p, "end Pauli channel");
  const double gamma1 = p[3] + p[4];
  const double gamma2 = p[5] + p[6];
  const double s = std::sin(half_angle(theta, epsilon));
  return -(1 - 2 * gamma1) * s - (1 - 2 * gamma2) * s * s;
}

double cost_depol(double theta, double epsilon, double p) {
  require(std::isfinite(p) && p >= 0 && p <= 1, ErrorKind::InvalidArgument, "depolarizing p must lie in [0, 1]");
  return (1 - p) * (1 - p) * cost_noiseless(theta, epsilon);
}

std::array<double, 12> effective_probabilities(const MomentPauliProbs &probs) {
  check_distribution(probs.first, "first-moment channel");
  check_distribution(probs.second, "second-moment channel");
  const auto &a = probs.first;
  const auto &b = probs.second;
  return {
      a[0] * b[0] + a[1] * b[1],  // II
      a[1] * b[0] + a[0] * b[1],  // ZI
      a[0] * b[2],                // IZ
      a[0] * b[3] + a[2] * b[4],  // XI
      a[2] * b[3] + a[0] * b[4],  // IX
      a[1] * b[3] + a[3] * b[4],  // YI
      a[1] * b[2],                // ZZ
      a[2] * b[0] + a[3] * b[1],  // XX
      a[3] * b[2],                // YY
      a[3] * b[3] + a[1] * b[4],  // ZX
      a[2] * b[2],                // XY
      a[3] * b[0] + a[2] * b[1],  // YX
  };
}

double cost_moment_pauli(double theta, double epsilon, const MomentPauliProbs &probs) {
  const auto p = effective_probabilities(probs);
  const double gamma1 = p[1] + p[2] + p[5] + p[9] + p[10] + p[11];
  const double gamma2 = p[3] + p[4] + p[5] + p[9];
  const double s = std::sin(half_angle(theta, epsilon));
  return (1 - gamma1 - gamma2) * (-2 * s * s);
}

double analytic_cost(const Scenario &s) {
  switch (s.variant) {
    case Variant::Noiseless: return cost_noiseless(s.theta, s.epsilon);
    case Variant::EndPauli: return cost_end_pauli(s.theta, s.epsilon, s.end_probs);
    case Variant::PerMomentDepol: return cost_depol(s.theta, s.epsilon, s.depolarizing);
    case Variant::PerMomentPauli: return cost_moment_pauli(s.theta, s.epsilon, s.moment_probs);
  }
  fail(ErrorKind::InvalidArgument, "unknown GHZ variant");
}

Eigen::Matrix4cd ucx(double phi) { return controlled(kI * rx(phi)); }

Eigen::Matrix4cd ucx_exponential(double phi) { return controlled(std::exp(kI * (phi / 2)) * rx(phi)); }

PauliChannel end_channel(const EndPauliProbs &p) {
  check_distribution(p, "end Pauli channel");
  return PauliChannel::from_labels(
      {{p[0], "II"}, {p[1], "XX"}, {p[2], "ZZ"}, {p[3], "ZI"}, {p[4], "IZ"}, {p[5], "XI"}, {p[6], "IX"}});
}

PauliChannel first_moment_channel(const MomentPauliProbs &p) {
  check_distribution(p.first, "first-moment channel");
  return PauliChannel::from_labels({{p.first[0], "II"}, {p.first[1], "ZI"}, {p.first[2], "XI"}, {p.first[3], "YI"}});
}

PauliChannel second_moment_channel(const MomentPauliProbs &p) {
  check_distribution(p.second, "second-moment channel");
  return PauliChannel::from_labels(
      {{p.second[0], "II"}, {p.second[1], "ZI"}, {p.second[2], "IZ"}, {p.second[3], "XI"}, {p.second[4], "IX"}});
}

PauliChannel effective_channel(const MomentPauliProbs &p) {
  NoiseLayout layout;
  layout.moments = {{first_moment_channel(p)}, {second_moment_channel(p)}};
  const std::array<CliffordMap, 2> cliffords{CliffordMap::hadamard(2, 0), CliffordMap::cnot(2, 0, 1)};
  return effective_end_channel(layout, cliffords).pauli;
}

double simulated_cost(const Scenario &s) {
  const double phi = std::numbers::pi + s.theta + s.epsilon;
  DensityMatrix rho(2);
  rho.apply_unitary(hadamard(), kFirst);
  switch (s.variant) {
    case Variant::Noiseless:
      rho.apply_unitary(ucx(phi), kBoth);
      break;
    case Variant::EndPauli:
      rho.apply_unitary(ucx(phi), kBoth);
      rho.apply_channel(end_channel(s.end_probs));
      break;
    case Variant::PerMomentDepol: {
      const DepolarizingChannel d{2, s.depolarizing};
      rho.apply_channel(d);
      rho.apply_unitary(ucx(phi), kBoth);
      rho.apply_channel(d);
      break;
    }
    case Variant::PerMomentPauli:
      rho.apply_channel(first_moment_channel(s.moment_probs));
      rho.apply_unitary(ucx_exponential(phi), kBoth);
      rho.apply_channel(second_moment_channel(s.moment_probs));
      break;
  }
  return stabilizer_cost(rho);
}

double simulated_delta(const Scenario &s) {
  require(s.variant == Variant::PerMomentPauli, ErrorKind::InvalidArgument,
          "the remainder is defined for the per-moment Pauli scenario");
  const double phi = std::numbers::pi + s.theta + s.epsilon;
  DensityMatrix pure(2);
  pure.apply_unitary(hadamard(), kFirst);
  pure.apply_unitary(ucx_exponential(phi), kBoth);
  const PauliChannel eff = effective_channel(s.moment_probs);
  const double predicted = stabilizer_cost(pure, chi_factor(eff, PauliString::from_label("XX")),
                                           chi_factor(eff, PauliString::from_label("ZZ")));
  return simulated_cost(s) - predicted;
}

}  // namespace vcem::ghz
