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

#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vcem/circuit.hpp"
#include "vcem/clifford.hpp"
#include "vcem/error.hpp"

namespace vcem {
namespace {

using testing::dense_circuit;
using testing::phase_overlap;
constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd hadamard() {
  Eigen::MatrixXcd h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

std::vector<double> zeros(const ParamCircuit &c) { return std::vector<double>(c.num_params(), 0.0); }

TEST(BuildGraphCircuit, SingleEdge) {
  const auto c = build_graph_circuit(Graph{2, {{0, 1}}});
  ASSERT_EQ(c.layers.size(), 2u);
  EXPECT_EQ(c.layers[0].size(), 2u);
  ASSERT_EQ(c.layers[1].size(), 1u);
  EXPECT_EQ(c.layers[1][0].kind, AbstractGateKind::CZ);
}

TEST(BuildGraphCircuit, EdgelessGraph) {
  const auto c = build_graph_circuit(Graph{4, {}});
  ASSERT_EQ(c.layers.size(), 1u);
  EXPECT_EQ(c.layers[0].size(), 4u);
}

TEST(BuildGraphCircuit, GridPacking) {
  const auto c = build_graph_circuit(Graph::grid(2, 5));
  std::size_t cz = 0;
  for (std::size_t l = 1; l < c.layers.size(); ++l) {
    std::set<int> used;
    for (const auto &g : c.layers[l]) {
      ++cz;
      for (int q : g.qubits) EXPECT_TRUE(used.insert(q).second);
    }
  }
  EXPECT_EQ(cz, 13u);
  EXPECT_LE(c.layers.size() - 1, 4u);
  // A 2x5 grid has maximum degree 3, so no packing can use fewer than 3 layers.
  EXPECT_GE(c.layers.size() - 1, 3u);
}

TEST(BuildGhzCircuit, Structure) {
  const auto two = build_ghz_circuit(2);
  ASSERT_EQ(two.layers.size(), 2u);
  EXPECT_EQ(two.layers[0][0].kind, AbstractGateKind::H);
  EXPECT_EQ(two.layers[1][0].kind, AbstractGateKind::CNOT);
  const auto three = build_ghz_circuit(3);
  ASSERT_EQ(three.layers.size(), 3u);
  EXPECT_EQ(three.layers[2][0].qubits, (std::vector<int>{1, 2}));
  EXPECT_THROW(build_ghz_circuit(1), Error);
}

TEST(BuildGhzCircuit, PreparesGhzState) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const Eigen::MatrixXcd u = dense_unitary(build_ghz_circuit(n));
    const Eigen::VectorXcd psi = u.col(0);
    const auto d = psi.size();
    EXPECT_NEAR(std::abs(psi(0)), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(psi(d - 1)), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(psi(0) - psi(d - 1)), 0, 1e-12);
  }
}

TEST(Transpile, HadamardSequence) {
  AbstractCircuit a;
  a.n = 1;
  a.layers = {{{AbstractGateKind::H, {0}}}};
  const auto c = transpile(a);
  ASSERT_EQ(c.num_moments(), 3u);
  const auto &g0 = c.moments()[0].gates[0];
  const auto &g1 = c.moments()[1].gates[0];
  const auto &g2 = c.moments()[2].gates[0];
  EXPECT_EQ(g0.kind, GateKind::Rz);
  EXPECT_EQ(g1.kind, GateKind::Rx);
  EXPECT_EQ(g2.kind, GateKind::Rz);
  EXPECT_DOUBLE_EQ(g0.clifford_angle, kPi / 2);
  EXPECT_DOUBLE_EQ(g1.clifford_angle, kPi / 2);
  EXPECT_DOUBLE_EQ(g2.clifford_angle, -3 * kPi / 2);
  EXPECT_EQ(g0.param, g2.param);
  EXPECT_NE(g0.param, g1.param);
  EXPECT_EQ(c.param_keys()[g0.param], "Rz:0");
  EXPECT_NEAR(phase_overlap(dense_circuit(c, zeros(c)), hadamard()), 1, 1e-12);
}

TEST(Transpile, SingleEdgeGraphCircuit) {
  const Graph g{2, {{0, 1}}};
  const auto c = transpile(build_graph_circuit(g));
  Eigen::MatrixXcd cz = Eigen::MatrixXcd::Identity(4, 4);
  cz(3, 3) = -1;
  const Eigen::MatrixXcd target = cz * testing::kron(hadamard(), hadamard());
  EXPECT_NEAR(phase_overlap(dense_circuit(c, zeros(c)), target), 1, 1e-10);
}

TEST(Transpile, EmptyCircuit) {
  AbstractCircuit a;
  a.n = 3;
  const auto c = transpile(a);
  EXPECT_EQ(c.num_moments(), 0u);
  EXPECT_EQ(c.num_params(), 0u);
}

TEST(Transpile, CnotAndCzGates) {
  Eigen::MatrixXcd cnot = Eigen::MatrixXcd::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
  Eigen::MatrixXcd cz = Eigen::MatrixXcd::Identity(4, 4);
  cz(3, 3) = -1;
  for (auto [kind, target] : {std::pair{AbstractGateKind::CNOT, cnot}, std::pair{AbstractGateKind::CZ, cz}}) {
    AbstractCircuit a;
    a.n = 2;
    a.layers = {{{kind, {0, 1}}}};
    const auto c = transpile(a);
    EXPECT_NEAR(phase_overlap(dense_circuit(c, zeros(c)), target), 1, 1e-12);
    for (const auto &m : c.moments())
      for (const auto &gate : m.gates) {
        const double quarters = gate.clifford_angle / (kPi / 2);
        EXPECT_NEAR(quarters, std::round(quarters), 1e-12);
      }
  }
}

TEST(Transpile, RandomGraphCircuitsPreserveUnitary) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int t = 0; t < 3; ++t) {
      const Graph g = testing::random_graph(rng, n, 0.5);
      const auto a = build_graph_circuit(g);
      const auto c = transpile(a);
      EXPECT_NO_THROW(c.validate());
      EXPECT_NEAR(phase_overlap(dense_circuit(c, zeros(c)), dense_unitary(a)), 1, 1e-10) << "n=" << n;
    }
  }
}

TEST(Transpile, ParameterSharingRule) {
  const Graph g = Graph::grid(2, 3);
  const auto c = transpile(build_graph_circuit(g));
  std::set<std::string> expected;
  for (const auto &m : c.moments()) {
    for (const auto &gate : m.gates) {
      expected.insert(param_key_for(gate.kind, gate.qubits));
      EXPECT_EQ(c.param_keys()[gate.param], param_key_for(gate.kind, gate.qubits));
    }
  }
  EXPECT_EQ(c.num_params(), expected.size());
  // Per qubit: one Rz and one Rx key; per edge: one Rzx key.
  EXPECT_EQ(c.num_params(), 2 * g.n + g.edges.size());
}

TEST(Transpile, MomentsAreDisjoint) {
  const auto c = transpile(build_graph_circuit(Graph::grid(3, 3)));
  for (const auto &m : c.moments()) {
    std::set<int> used;
    for (const auto &g : m.gates)
      for (int q : g.qubits) EXPECT_TRUE(used.insert(q).second);
  }
}

TEST(GateUnitary, RxHalfTurn) {
  const NativeGate g{GateKind::Rx, {0}, kPi, 0};
  Eigen::MatrixXcd expected(2, 2);
  expected << 0, Complex(0, -1), Complex(0, -1), 0;
  EXPECT_LT((gate_unitary(g, 0, 0) - expected).norm(), 1e-15);
}

TEST(GateUnitary, CompensatedRz) {
  const NativeGate g{GateKind::Rz, {0}, kPi / 2, 0};
  const double eps = 0.0123;
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(2, 2);
  expected(0, 0) = std::exp(Complex(0, -kPi / 4));
  expected(1, 1) = std::exp(Complex(0, kPi / 4));
  EXPECT_LT((gate_unitary(g, -eps, eps) - expected).norm(), 1e-15);
}

TEST(GateUnitary, OnlyTheSumMatters) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (GateKind kind : {GateKind::Rz, GateKind::Rx, GateKind::Rzx}) {
    const NativeGate g{kind, kind == GateKind::Rzx ? std::vector<int>{0, 1} : std::vector<int>{0}, -kPi / 2, 0};
    const double t = u(rng), e = u(rng);
    EXPECT_LT((gate_unitary(g, t, e) - gate_unitary(g, t + e, 0)).norm(), 1e-14);
    const Eigen::MatrixXcd split =
        testing::dense_rotation(g.local_generator(), t + e) * testing::dense_rotation(g.local_generator(), -kPi / 2);
    EXPECT_LT((gate_unitary(g, t, e) - split).norm(), 1e-14);
    const Eigen::MatrixXcd uu = gate_unitary(g, t, e);
    EXPECT_LT((uu.adjoint() * uu - Eigen::MatrixXcd::Identity(uu.rows(), uu.cols())).norm(), 1e-14);
  }
  const NativeGate bad{GateKind::Rz, {0}, 0, 0};
  EXPECT_THROW(gate_unitary(bad, std::nan(""), 0), Error);
}

TEST(GateUnitary, ZeroErrorGateIsClifford) {
  for (int k = -4; k <= 4; ++k) {
    const NativeGate g{GateKind::Rzx, {0, 1}, k * kPi / 2, 0};
    EXPECT_NO_THROW(CliffordMap::from_unitary(gate_unitary(g, 0, 0)));
  }
  const NativeGate g{GateKind::Rz, {0}, kPi / 2, 0};
  EXPECT_THROW(CliffordMap::from_unitary(gate_unitary(g, 0.3, 0)), Error);
}

TEST(SampleCoherentErrors, Properties) {
  auto c = transpile(build_graph_circuit(Graph::grid(2, 5)));
  for (double e : sample_coherent_errors(c, 0, 9)) EXPECT_EQ(e, 0);
  const auto a = sample_coherent_errors(c, 0.01, 42);
  const auto b = sample_coherent_errors(c, 0.01, 42);
  const auto other = sample_coherent_errors(c, 0.01, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, other);
  ASSERT_EQ(a.size(), c.num_params());
  for (double e : a) {
    EXPECT_LE(std::abs(e), 0.01);
  }
  EXPECT_THROW(sample_coherent_errors(c, -0.1, 1), Error);
}

TEST(SampleCoherentErrors, DrawDependsOnlyOnKey) {
  auto small = transpile(build_graph_circuit(Graph::line(3)));
  auto large = transpile(build_graph_circuit(Graph::line(6)));
  const auto es = sample_coherent_errors(small, 0.05, 7);
  const auto el = sample_coherent_errors(large, 0.05, 7);
  for (std::size_t k = 0; k < small.num_params(); ++k) {
    const auto idx = large.find_key(small.param_keys()[k]);
    ASSERT_TRUE(idx.has_value());
    EXPECT_EQ(es[k], el[*idx]);
  }
  const auto doubled = sample_coherent_errors(small, 0.1, 7);
  for (std::size_t k = 0; k < es.size(); ++k) EXPECT_NEAR(doubled[k], 2 * es[k], 1e-15);
}

TEST(ParamCircuit, RejectsOverlapAndNonCliffordOffsets) {
  ParamCircuit c(2);
  const auto k = c.intern_key("Rz:0", GateKind::Rz);
  Moment overlapping{{{GateKind::Rz, {0}, 0, k}, {GateKind::Rz, {0}, 0, k}}};
  EXPECT_THROW(c.add_moment(overlapping), Error);
  Moment odd_angle{{{GateKind::Rz, {0}, 0.3, k}}};
  EXPECT_THROW(c.add_moment(odd_angle), Error);
  EXPECT_THROW(c.set_epsilons({0.1, 0.2}), Error);
}

TEST(ParseGraphSpec, Forms) {
  EXPECT_EQ(parse_graph_spec("line:4").edges.size(), 3u);
  const Graph grid = parse_graph_spec("grid:2x5");
  EXPECT_EQ(grid.n, 10u);
  EXPECT_EQ(grid.edges.size(), 13u);
  const auto path = std::filesystem::temp_directory_path() / "vcem_test_edges.txt";
  {
    std::ofstream out(path);
    out << "# triangle\n0 1\n1 2\n0 2\n";
  }
  const Graph tri = parse_graph_spec(path.string());
  EXPECT_EQ(tri.n, 3u);
  EXPECT_EQ(tri.edges.size(), 3u);
  std::filesystem::remove(path);
  EXPECT_THROW(parse_graph_spec("grid:2by5"), Error);
  EXPECT_THROW(parse_graph_spec("line:x"), Error);
  EXPECT_THROW(parse_graph_spec("/nonexistent/graph.txt"), Error);
}

TEST(CliffordMap, MatchesDenseConjugation) {
  const auto all = all_pauli_strings(2);
  Eigen::MatrixXcd cz = Eigen::MatrixXcd::Identity(4, 4);
  cz(3, 3) = -1;
  const CliffordMap tab = CliffordMap::cz(2, 0, 1);
  EXPECT_EQ(tab, CliffordMap::from_unitary(cz));
  for (const auto &p : all) {
    const Eigen::MatrixXcd lhs = cz * testing::dense_pauli(p) * cz.adjoint();
    EXPECT_LT((lhs - testing::dense_pauli(tab.conjugate(p))).norm(), 1e-12) << p.label();
  }
}

TEST(CliffordMap, CircuitCliffordPartMatchesDense) {
  const auto c = transpile(build_graph_circuit(Graph::line(3)));
  const CliffordMap whole = clifford_part(c, 0, c.num_moments());
  const Eigen::MatrixXcd u = dense_circuit(c, std::vector<double>(c.num_params(), 0.0));
  // Zero the coherent errors' effect: dense_circuit uses the circuit's epsilons, which are zero here.
  for (const auto &p : all_pauli_strings(3)) {
    const Eigen::MatrixXcd lhs = u * testing::dense_pauli(p) * u.adjoint();
    EXPECT_LT((lhs - testing::dense_pauli(whole.conjugate(p))).norm(), 1e-10) << p.label();
    const PauliString back = heisenberg_through(c, 0, c.num_moments(), p);
    EXPECT_LT((u.adjoint() * testing::dense_pauli(p) * u - testing::dense_pauli(back)).norm(), 1e-10);
  }
}

}  // namespace
}  // namespace vcem
