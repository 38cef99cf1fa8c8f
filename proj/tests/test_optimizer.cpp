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

#include "vcem/error.hpp"
#include "vcem/optimizer.hpp"

namespace vcem {
namespace {

TEST(Minimize, RecoversGhzUnderCoherentError) {
  auto c = transpile(build_ghz_circuit(2));
  c.set_epsilons(sample_coherent_errors(c, 0.05, 4));
  PureCost f(c, ghz_stabilizers(2));
  f.method = GradientMethod::Adjoint;
  OptimizerSettings s;
  s.max_iters = 3000;
  s.learning_rate = 0.005;
  s.grad_tolerance = 1e-6;
  const auto trace = minimize(f, s);
  EXPECT_TRUE(trace.converged);
  EXPECT_NEAR(trace.final_cost, -2, 1e-8);
  EXPECT_GT(trace.iterations.front().cost, trace.final_cost);
}

TEST(Minimize, PlainDescentOnLine) {
  auto c = transpile(build_graph_circuit(Graph::line(3)));
  c.set_epsilons(sample_coherent_errors(c, 0.02, 5));
  PureCost f(c, graph_stabilizers(Graph::line(3)));
  f.method = GradientMethod::Adjoint;
  OptimizerSettings s;
  s.adaptive = false;
  s.learning_rate = 0.02;
  s.max_iters = 2000;
  s.grad_tolerance = 1e-8;
  const auto trace = minimize(f, s);
  EXPECT_TRUE(trace.converged);
  EXPECT_NEAR(trace.final_cost, -3, 1e-10);
}

TEST(Minimize, ZeroErrorConvergesImmediately) {
  const auto c = transpile(build_graph_circuit(Graph::line(4)));
  PureCost f(c, graph_stabilizers(Graph::line(4)));
  std::size_t calls = 0;
  const auto trace = minimize(f, OptimizerSettings{}, [&](const IterationRecord &) { ++calls; });
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.iterations.size(), 1u);
  EXPECT_EQ(calls, 1u);
  EXPECT_NEAR(trace.final_cost, -4, 1e-12);
  EXPECT_EQ(trace.iterations.front().metrics.rz, 0.0);
}

TEST(Minimize, StopsAtIterationCap) {
  auto c = transpile(build_graph_circuit(Graph::line(3)));
  c.set_epsilons(sample_coherent_errors(c, 0.05, 6));
  PureCost f(c, graph_stabilizers(Graph::line(3)));
  OptimizerSettings s;
  s.max_iters = 3;
  const auto trace = minimize(f, s);
  EXPECT_FALSE(trace.converged);
  EXPECT_EQ(trace.iterations.size(), 4u);
  for (std::size_t k = 0; k < trace.iterations.size(); ++k) EXPECT_EQ(trace.iterations[k].iter, k);
}

TEST(OptimizerSettings, Validation) {
  const auto expect_config = [](OptimizerSettings s) {
    try {
      s.validate();
      FAIL() << "expected a configuration error";
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::Config);
    }
  };
  OptimizerSettings s;
  EXPECT_NO_THROW(s.validate());
  s.max_iters = 0;
  expect_config(s);
  s = {};
  s.learning_rate = -1;
  expect_config(s);
  s = {};
  s.grad_tolerance = 0;
  expect_config(s);
  s = {};
  s.beta2 = 1;
  expect_config(s);
  s = {};
  s.adam_epsilon = 0;
  expect_config(s);
}

TEST(EpsilonMetrics, PerFamilyNorms) {
  const std::vector<double> theta{0.1, -0.2, 0.0, 0.3};
  const std::vector<double> eps{0.2, 0.2, 0.4, -0.3};
  const std::vector<GateKind> families{GateKind::Rz, GateKind::Rx, GateKind::Rz, GateKind::Rzx};
  const auto m = epsilon_metrics(theta, eps, families);
  EXPECT_NEAR(m.rz, std::sqrt(0.09 + 0.16), 1e-15);
  EXPECT_NEAR(m.rx, 0, 1e-15);
  EXPECT_NEAR(m.rzx, 0, 1e-15);
  EXPECT_THROW(epsilon_metrics(theta, std::vector<double>{0.1}, families), Error);
}

}  // namespace
}  // namespace vcem
