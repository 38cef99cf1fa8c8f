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
#include <span>
#include <vector>

#include "vcem/circuit.hpp"
#include "vcem/cost.hpp"

namespace vcem {

struct OptimizerSettings {
  std::size_t max_iters = 500;
  double learning_rate = 0.01;
  double grad_tolerance = 1e-7;
  /// Per-parameter first/second moment rescaling (Adam) when true, plain descent otherwise.
  bool adaptive = true;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;

  void validate() const;
};

/// Euclidean norms of theta + epsilon restricted to each gate family.
struct EpsilonMetrics {
  double rz = 0;
  double rx = 0;
  double rzx = 0;
};

EpsilonMetrics epsilon_metrics(std::span<const double> theta, std::span<const double> epsilons,
                               std::span<const GateKind> families);

struct IterationRecord {
  std::size_t iter = 0;
  double cost = 0;
  double grad_norm = 0;
  EpsilonMetrics metrics;
};

struct OptimizationTrace {
  std::vector<IterationRecord> iterations;
  std::vector<double> final_theta;
  double final_cost = 0;
  double final_grad_norm = 0;
  bool converged = false;
};

/// Called after every recorded iteration; useful for progress reporting.
using IterationCallback = std::function<void(const IterationRecord &)>;

/// First-order minimization from theta = 0. Iteration k records the cost and
/// gradient norm at the k-th iterate; the loop stops as soon as the gradient
/// norm falls below the tolerance or after max_iters updates.
OptimizationTrace minimize(const CostEvaluator &f, const OptimizerSettings &settings,
                           const IterationCallback &on_iteration = {});

}  // namespace vcem
