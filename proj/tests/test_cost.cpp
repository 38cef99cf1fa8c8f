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

#include <gtest/gtest.h>

#include "support.hpp"
#include "vcem/cost.hpp"
#include "vcem/error.hpp"
#include "vcem/simulator.hpp"

namespace vcem {
namespace {

struct Instance {
  ParamCircuit circuit;
  StabilizerSet stabs;
};

Instance graph_instance(const Graph &g, double coh_mag, std::uint64_t seed) {
  auto c = transpile(build_graph_circuit(g));
  c.set_epsilons(sample_coherent_errors(c, coh_mag, seed));
  return {std::move(c), graph_stabilizers(g)};
}

std::vector<double> negate(const std::vector<double> &v) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = -v[k];
  return out;
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

/// Keeps the circuit but reports a non-Pauli generator, so the shift rule must refuse it.
class OpaqueCost final : public CostEvaluator {
 public:
  explicit OpaqueCost(PureCost inner) : inner_(std::move(inner)) {}
  const ParamCircuit &circuit() const override { return inner_.circuit(); }
  const StabilizerSet &stabilizers() const override { return inner_.stabilizers(); }
  CostReport report_angles(std::span<const double> angles) const override { return inner_.report_angles(angles); }
  bool pauli_generators() const override { return false; }

 private:
  PureCost inner_;
};

TEST(Cost, MinimumAtMinusEpsilon) {
  for (const Graph &g : {Graph::line(4), Graph::grid(2, 3)}) {
    const auto inst = graph_instance(g, 0.05, 9);
    const auto r = cost(inst.circuit, negate(inst.circuit.epsilons()), inst.stabs);
    EXPECT_NEAR(r.total, -static_cast<double>(g.n), 1e-12);
    for (double ci : r.per_stabilizer) EXPECT_NEAR(ci, -1, 1e-12);
  }
}

TEST(Cost, BoundedBelowByMinusN) {
  std::mt19937_64 rng(1);
  const auto inst = graph_instance(Graph::line(4), 0.05, 2);
  for (int t = 0; t < 50; ++t) {
    const auto r = cost(inst.circuit, testing::random_vector(rng, inst.circuit.num_params(), 3.0), inst.stabs);
    EXPECT_GE(r.total, -4 - 1e-12);
  }
}

TEST(Cost, MatchesDenseExpectations) {
  std::mt19937_64 rng(2);
  const auto inst = graph_instance(Graph::line(3), 0.1, 3);
  const auto theta = testing::random_vector(rng, inst.circuit.num_params(), 1.0);
  const Eigen::VectorXcd psi = testing::dense_circuit(inst.circuit, theta).col(0);
  double expected = 0;
  for (const auto &s : inst.stabs.generators) expected -= (psi.adjoint() * testing::dense_pauli(s) * psi)(0).real();
  EXPECT_NEAR(cost(inst.circuit, theta, inst.stabs).total, expected, 1e-12);
}

TEST(Cost, EndPauliNoiseEqualsChiScaling) {
  std::mt19937_64 rng(3);
  const auto inst = graph_instance(Graph::line(4), 0.05, 4);
  const auto layout = build_noise_layout(parse_noise_spec("end:pauli:m=1+2,mag=0.05"), inst.circuit, 5);
  const auto end = effective_end_channel(layout, inst.circuit);
  for (int t = 0; t < 5; ++t) {
    const auto theta = testing::random_vector(rng, inst.circuit.num_params(), 1.0);
    const auto noisy = noisy_cost(inst.circuit, theta, layout, inst.stabs);
    const auto scaled = chi_scaled_cost(inst.circuit, theta, end.pauli, inst.stabs);
    EXPECT_NEAR(noisy.total, scaled.total, 1e-12);
    EXPECT_NEAR(delta_cost(inst.circuit, theta, layout, inst.stabs), 0, 1e-12);
  }
}

TEST(Cost, GlobalDepolarizingScalesUniformly) {
  std::mt19937_64 rng(4);
  const auto inst = graph_instance(Graph::line(3), 0.05, 6);
  const auto layout = build_noise_layout(parse_noise_spec("end:depol:p=0.2"), inst.circuit, 1);
  const auto theta = testing::random_vector(rng, inst.circuit.num_params(), 1.0);
  const auto noisy = noisy_cost(inst.circuit, theta, layout, inst.stabs);
  const auto pure = cost(inst.circuit, theta, inst.stabs);
  EXPECT_NEAR(noisy.total, 0.8 * pure.total, 1e-12);
}

TEST(Cost, DeltaVanishesWithoutCoherentError) {
  std::mt19937_64 rng(5);
  const auto inst = graph_instance(Graph::line(4), 0.0, 1);
  const auto layout = build_noise_layout(parse_noise_spec("pauli:m=1+2,mag=0.05"), inst.circuit, 3);
  EXPECT_NEAR(delta_cost(inst.circuit, std::vector<double>(inst.circuit.num_params(), 0.0), layout, inst.stabs), 0,
              1e-12);
  const auto noisy_inst = graph_instance(Graph::line(4), 0.05, 1);
  EXPECT_NEAR(delta_cost(noisy_inst.circuit, negate(noisy_inst.circuit.epsilons()), layout, noisy_inst.stabs), 0,
              1e-12);
  const auto theta = testing::random_vector(rng, inst.circuit.num_params(), 0.5);
  EXPECT_GT(std::abs(delta_cost(inst.circuit, theta, layout, inst.stabs)), 1e-6);
  EXPECT_THROW(DeltaCost(inst.circuit, build_noise_layout(parse_noise_spec("depol:p=0.1"), inst.circuit, 1),
                         inst.stabs),
               Error);
}

TEST(Gradient, ShiftMatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  const auto inst = graph_instance(Graph{3, {{0, 1}, {1, 2}, {0, 2}}}, 0.1, 7);
  const auto layout = build_noise_layout(parse_noise_spec("pauli:m=1+2,mag=0.02"), inst.circuit, 8);
  const PureCost pure(inst.circuit, inst.stabs);
  const NoisyCost noisy(inst.circuit, layout, inst.stabs);
  const DeltaCost delta(inst.circuit, layout, inst.stabs);
  for (const CostEvaluator *f : std::initializer_list<const CostEvaluator *>{&pure, &noisy, &delta}) {
    const auto theta = testing::random_vector(rng, inst.circuit.num_params(), 1.0);
    const auto shift = parameter_shift_gradient(*f, theta);
    const auto fd = finite_difference_gradient([&](std::span<const double> t) { return f->value(t); }, theta);
    EXPECT_LT(max_abs_diff(shift, fd), 1e-8);
  }
}

TEST(Gradient, AdjointMatchesShift) {
  std::mt19937_64 rng(7);
  const auto inst = graph_instance(Graph::grid(2, 2), 0.1, 8);
  const auto layout = build_noise_layout(parse_noise_spec("pauli:m=1+2,mag=0.02"), inst.circuit, 9);
  PureCost pure(inst.circuit, inst.stabs);
  NoisyCost noisy(inst.circuit, layout, inst.stabs);
  ChiScaledCost scaled(inst.circuit, effective_end_channel(layout, inst.circuit).pauli, inst.stabs);
  DeltaCost delta(inst.circuit, layout, inst.stabs);
  for (CostEvaluator *f : std::initializer_list<CostEvaluator *>{&pure, &noisy, &scaled, &delta}) {
    const auto theta = testing::random_vector(rng, inst.circuit.num_params(), 1.0);
    f->method = GradientMethod::ParameterShift;
    const auto shift = f->gradient(theta);
    f->method = GradientMethod::Adjoint;
    const auto adj = f->gradient(theta);
    EXPECT_LT(max_abs_diff(shift, adj), 1e-11);
    const auto vg = f->value_and_gradient(theta);
    EXPECT_NEAR(vg.value, f->value(theta), 1e-12);
    EXPECT_LT(max_abs_diff(vg.gradient, adj), 1e-12);
  }
}

TEST(Gradient, AdjointWithTightMemoryBudget) {
  std::mt19937_64 rng(8);
  const auto inst = graph_instance(Graph::line(4), 0.1, 8);
  const auto layout = build_noise_layout(parse_noise_spec("pauli:m=1+2,mag=0.02"), inst.circuit, 9);
  const auto theta = testing::random_vector(rng, inst.circuit.num_params(), 1.0);
  const std::vector<double> w(inst.stabs.size(), -1.0);
  const auto full = adjoint_gradient_noisy(inst.circuit, theta, layout, inst.stabs.generators, w);
  const auto tight = adjoint_gradient_noisy(inst.circuit, theta, layout, inst.stabs.generators, w, 4096);
  EXPECT_NEAR(full.value, tight.value, 1e-13);
  EXPECT_LT(max_abs_diff(full.gradient, tight.gradient), 1e-12);
}

TEST(Gradient, ShiftRefusesNonPauliGenerators) {
  const auto inst = graph_instance(Graph::line(2), 0.0, 1);
  OpaqueCost f{PureCost(inst.circuit, inst.stabs)};
  EXPECT_THROW(parameter_shift_gradient(f, std::vector<double>(inst.circuit.num_params(), 0.0)), Error);
}

TEST(Gradient, VanishesAtMinusEpsilonUnderPauliNoise) {
  for (std::size_t n = 3; n <= 5; ++n) {
    const auto inst = graph_instance(Graph::line(n), 0.05, n);
    const auto theta = negate(inst.circuit.epsilons());
    for (const char *spec : {"pauli:m=1+2,mag=0.01", "pauli:m=1,mag=0.2", "depol:p=0.1"}) {
      NoisyCost f(inst.circuit, build_noise_layout(parse_noise_spec(spec), inst.circuit, 10 + n), inst.stabs);
      f.method = GradientMethod::Adjoint;
      EXPECT_LT(euclidean_norm(f.gradient(theta)), 1e-10) << n << " " << spec;
    }
  }
}

TEST(Hessian, PositiveDefiniteAtMinimum) {
  const auto inst = graph_instance(Graph::line(3), 0.05, 11);
  const auto theta = negate(inst.circuit.epsilons());
  const PureCost pure(inst.circuit, inst.stabs);
  const auto layout = build_noise_layout(parse_noise_spec("pauli:m=1+2,mag=0.01"), inst.circuit, 12);
  const NoisyCost noisy(inst.circuit, layout, inst.stabs);
  for (const CostEvaluator *f : std::initializer_list<const CostEvaluator *>{&pure, &noisy}) {
    const auto h = hessian_fd([&](std::span<const double> t) { return f->value(t); }, theta);
    EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-6);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (h + h.transpose()));
    EXPECT_GT(es.eigenvalues().minCoeff(), 1e-3);
  }
}

TEST(Hessian, QuadraticOracle) {
  Eigen::Matrix3d a;
  a << 2, 1, 0, 1, 3, -1, 0, -1, 4;
  const auto f = [&](std::span<const double> t) {
    const Eigen::Vector3d v(t[0], t[1], t[2]);
    return 0.5 * v.dot(a * v) + v.sum();
  };
  const std::vector<double> at{0.3, -0.2, 0.1};
  EXPECT_LT((hessian_fd(f, at) - a).cwiseAbs().maxCoeff(), 1e-6);
  const auto g = finite_difference_gradient(f, at);
  const Eigen::Vector3d expected = a * Eigen::Vector3d(0.3, -0.2, 0.1) + Eigen::Vector3d::Ones();
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(g[k], expected(k), 1e-8);
  EXPECT_THROW(finite_difference_gradient(f, at, 0.0), Error);
}

TEST(Cost, RejectsMismatchedStabilizers) {
  const auto c = transpile(build_graph_circuit(Graph::line(3)));
  EXPECT_THROW(PureCost(c, graph_stabilizers(Graph::line(4))), Error);
  EXPECT_THROW(ChiScaledCost(c, std::vector<double>{1.0}, graph_stabilizers(Graph::line(3))), Error);
}

}  // namespace
}  // namespace vcem
