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

#include <numbers>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vcem/error.hpp"
#include "vcem/simulator.hpp"

namespace vcem {
namespace {

PauliString P(const char *label) { return PauliString::from_label(label); }

Eigen::VectorXcd dense_state(const ParamCircuit &c, const std::vector<double> &theta) {
  const Eigen::MatrixXcd u = testing::dense_circuit(c, theta);
  return u.col(0);
}

TEST(StateVector, GhzPreparation) {
  const auto c = transpile(build_ghz_circuit(3));
  const std::vector<double> zero(c.num_params(), 0.0);
  const auto psi = run_pure(c, zero);
  const auto v = psi.to_vector();
  EXPECT_NEAR(std::abs(v(0)), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(v(7)), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(psi.norm(), 1, 1e-14);
  for (const auto &s : ghz_stabilizers(3).generators) EXPECT_NEAR(expectation(psi, s), 1, 1e-14) << s.label();
}

TEST(StateVector, EmptyCircuitIsAllZero) {
  ParamCircuit c(3);
  const auto psi = run_pure(c, std::vector<double>{});
  EXPECT_NEAR(std::abs(psi.amplitudes()[0] - Complex(1, 0)), 0, 1e-15);
  EXPECT_NEAR(expectation(psi, P("ZZZ")), 1, 1e-15);
  EXPECT_NEAR(expectation(psi, P("-ZII")), -1, 1e-15);
}

TEST(StateVector, GraphStateStabilizers) {
  for (const Graph &g : {Graph{2, {{0, 1}}}, Graph::line(5), Graph::grid(2, 3)}) {
    const auto c = transpile(build_graph_circuit(g));
    const auto psi = run_pure(c, std::vector<double>(c.num_params(), 0.0));
    for (const auto &s : graph_stabilizers(g).generators) EXPECT_NEAR(expectation(psi, s), 1, 1e-13) << s.label();
  }
}

TEST(StateVector, MatchesDenseProductOnRandomCircuits) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    auto c = transpile(build_graph_circuit(testing::random_graph(rng, 2 + t % 4, 0.5)));
    c.set_epsilons(testing::random_vector(rng, c.num_params(), 0.1));
    const auto theta = testing::random_vector(rng, c.num_params(), 1.0);
    const Eigen::VectorXcd expected = dense_state(c, theta);
    const Eigen::VectorXcd got = run_pure(c, theta).to_vector();
    EXPECT_LT((got - expected).norm(), 1e-12);
  }
}

TEST(StateVector, UnapplyInvertsApply) {
  std::mt19937_64 rng(3);
  auto c = transpile(build_graph_circuit(Graph::line(4)));
  const auto angles = gate_angles(c, testing::random_vector(rng, c.num_params(), 1.0));
  StateVector psi = run_pure_angles(c, angles);
  for (std::size_t q = c.num_moments(); q-- > 0;) unapply_moment(psi, c, q, angles);
  EXPECT_NEAR(std::abs(psi.amplitudes()[0]), 1, 1e-13);
}

TEST(StateVector, ApplyUnitaryOnSubset) {
  StateVector psi(3);
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  const std::vector<int> q{1};
  psi.apply_unitary(x, q);
  EXPECT_NEAR(std::abs(psi.amplitudes()[2]), 1, 1e-15);
}

TEST(DensityMatrix, NoiselessLayoutEqualsPureState) {
  std::mt19937_64 rng(4);
  auto c = transpile(build_graph_circuit(Graph::line(4)));
  const auto theta = testing::random_vector(rng, c.num_params(), 1.0);
  const auto rho = run_noisy(c, theta, NoiseLayout::noiseless(c.num_moments()));
  const auto pure = DensityMatrix::from_pure(run_pure(c, theta));
  double diff = 0;
  for (std::size_t k = 0; k < rho.data().size(); ++k) diff = std::max(diff, std::abs(rho.data()[k] - pure.data()[k]));
  EXPECT_LT(diff, 1e-13);
}

TEST(DensityMatrix, MatchesDenseInterleavedEvolution) {
  std::mt19937_64 rng(5);
  for (const char *spec : {"pauli:m=1+2,mag=0.05", "pauli:m=2,mag=0.03", "depol:p=0.05"}) {
    auto c = transpile(build_graph_circuit(testing::random_graph(rng, 3, 0.7)));
    c.set_epsilons(testing::random_vector(rng, c.num_params(), 0.1));
    const auto layout = build_noise_layout(parse_noise_spec(spec), c, 17);
    const auto theta = testing::random_vector(rng, c.num_params(), 1.0);
    const Eigen::MatrixXcd expected = testing::dense_noisy(c, theta, layout);
    const auto rho = run_noisy(c, theta, layout);
    EXPECT_LT((rho.to_matrix() - expected).cwiseAbs().maxCoeff(), 1e-13) << spec;
    EXPECT_NEAR(rho.trace().real(), 1, 1e-13);
    EXPECT_LT(rho.hermiticity_error(), 1e-14);
  }
}

TEST(DensityMatrix, DepolarizingMixesTowardIdentity) {
  const auto c = transpile(build_ghz_circuit(2));
  const std::vector<double> zero(c.num_params(), 0.0);
  DensityMatrix rho = run_noisy(c, zero, NoiseLayout::noiseless(c.num_moments()));
  const Eigen::MatrixXcd before = rho.to_matrix();
  rho.apply_channel(DepolarizingChannel{2, 0.3});
  const Eigen::MatrixXcd expected = 0.7 * before + 0.3 * Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  EXPECT_LT((rho.to_matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DensityMatrix, BitFlipOnZeroState) {
  DensityMatrix rho(1);
  rho.apply_channel(PauliChannel::from_labels({{0.7, "I"}, {0.3, "X"}}));
  EXPECT_NEAR(rho(0, 0).real(), 0.7, 1e-15);
  EXPECT_NEAR(rho(1, 1).real(), 0.3, 1e-15);
  EXPECT_NEAR(std::abs(rho(0, 1)), 0, 1e-15);
}

TEST(DensityMatrix, TraceAndHermiticityPreservedUnderRandomChannels) {
  std::mt19937_64 rng(6);
  auto c = transpile(build_graph_circuit(Graph::grid(2, 2)));
  c.set_epsilons(sample_coherent_errors(c, 0.05, 3));
  const auto layout = build_noise_layout(parse_noise_spec("pauli:m=1+2,mag=0.03"), c, 7);
  const auto rho = run_noisy(c, testing::random_vector(rng, c.num_params(), 2.0), layout);
  EXPECT_NEAR(rho.trace().real(), 1, 1e-13);
  EXPECT_NEAR(rho.trace().imag(), 0, 1e-13);
  EXPECT_LT(rho.hermiticity_error(), 1e-14);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.to_matrix());
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-13);
}

TEST(DensityMatrix, GlobalPhaseInvariance) {
  StateVector psi(2);
  psi.apply_rotation(P("XI"), 0.7);
  StateVector phased = psi;
  for (auto &a : phased.amplitudes()) a *= std::exp(Complex(0, 1.3));
  const auto a = DensityMatrix::from_pure(psi), b = DensityMatrix::from_pure(phased);
  for (std::size_t k = 0; k < a.data().size(); ++k) EXPECT_NEAR(std::abs(a.data()[k] - b.data()[k]), 0, 1e-15);
  EXPECT_NEAR(expectation(psi, P("ZI")), expectation(phased, P("ZI")), 1e-15);
}

TEST(DensityMatrix, TraceProducts) {
  std::mt19937_64 rng(7);
  auto c = transpile(build_graph_circuit(Graph::line(3)));
  const auto layout = build_noise_layout(parse_noise_spec("pauli:m=1,mag=0.1"), c, 2);
  const auto rho = run_noisy(c, testing::random_vector(rng, c.num_params(), 1.0), layout);
  const auto all = all_pauli_strings(3);
  std::vector<double> w(all.size());
  for (auto &x : w) x = std::normal_distribution<double>()(rng);
  const auto o = DensityMatrix::from_pauli_sum(3, all, w);
  const std::vector<PauliString> ps{P("XZI"), P("YYZ"), P("III")};
  const auto got = trace_products(o, ps, rho);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Complex expected = (o.to_matrix() * testing::dense_pauli(ps[k]) * rho.to_matrix()).trace();
    EXPECT_NEAR(std::abs(got[k] - expected), 0, 1e-12);
    EXPECT_NEAR(std::abs(trace_product(o, ps[k], rho) - expected), 0, 1e-12);
  }
}

TEST(Simulator, ResourceCeilings) {
  try {
    DensityMatrix rho(kMaxNoisyQubits + 1);
    FAIL() << "expected a resource error";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ResourceLimit);
  }
  try {
    StateVector psi(kMaxPureQubits + 1);
    FAIL() << "expected a resource error";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ResourceLimit);
  }
}

TEST(Simulator, RejectsMisalignedInputs) {
  const auto c = transpile(build_graph_circuit(Graph::line(3)));
  EXPECT_THROW(run_pure(c, std::vector<double>(c.num_params() + 1, 0.0)), Error);
  EXPECT_THROW(run_noisy(c, std::vector<double>(c.num_params(), 0.0), NoiseLayout::noiseless(1)), Error);
}

}  // namespace
}  // namespace vcem
