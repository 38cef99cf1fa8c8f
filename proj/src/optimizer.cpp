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

#include "vcem/optimizer.hpp"

#include <cmath>

#include "vcem/error.hpp"

namespace vcem {

void OptimizerSettings::validate() const {
  require(max_iters >= 1, ErrorKind::Config, "max_iters must be at least 1");
  require(std::isfinite(learning_rate) && learning_rate > 0, ErrorKind::Config, "learning rate must be positive");
  require(std::isfinite(grad_tolerance) && grad_tolerance > 0, ErrorKind::Config, "gradient tolerance must be positive");
  require(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1, ErrorKind::Config, "moment decay rates must lie in [0, 1)");
  require(adam_epsilon > 0, ErrorKind::Config, "adam epsilon must be positive");
}

EpsilonMetrics epsilon_metrics(std::span<const double> theta, std::span<const double> epsilons,
                               std::span<const GateKind> families) {
  require(theta.size() == epsilons.size(), ErrorKind::SizeMismatch, "theta and epsilons differ in length");
  require(families.size() == theta.size(), ErrorKind::InvalidArgument, "every parameter key needs a gate family");
  double rz = 0, rx = 0, rzx = 0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double d = theta[k] + epsilons[k];
    switch (families[k]) {
      case GateKind::Rz: rz += d * d; break;
      case GateKind::Rx: rx += d * d; break;
      case GateKind::Rzx: rzx += d * d; break;
    }
  }
  return {std::sqrt(rz), std::sqrt(rx), std::sqrt(rzx)};
}

OptimizationTrace minimize(const CostEvaluator &f, const OptimizerSettings &settings,
                           const IterationCallback &on_iteration) {
  settings.validate();
  const ParamCircuit &c = f.circuit();
  const std::size_t dim = c.num_params();
  std::vector<double> theta(dim, 0.0), m(dim, 0.0), v(dim, 0.0);
  OptimizationTrace trace;

  for (std::size_t it = 0;; ++it) {
    auto [value, grad] = f.value_and_gradient(theta);
    require(std::isfinite(value), ErrorKind::Numeric, "non-finite cost at iteration " + std::to_string(it));
    for (double g : grad) require(std::isfinite(g), ErrorKind::Numeric, "non-finite gradient component");
    IterationRecord rec{it, value, euclidean_norm(grad), epsilon_metrics(theta, c.epsilons(), c.param_families())};
    trace.iterations.push_back(rec);
    if (on_iteration) on_iteration(rec);
    trace.final_theta = theta;
    trace.final_cost = value;
    trace.final_grad_norm = rec.grad_norm;
    if (rec.grad_norm < settings.grad_tolerance) {
      trace.converged = true;
      break;
    }
    if (it == settings.max_iters) break;

    if (settings.adaptive) {
      const double t = static_cast<double>(it + 1);
      const double c1 = 1 - std::pow(settings.beta1, t);
      const double c2 = 1 - std::pow(settings.beta2, t);
      for (std::size_t k = 0; k < dim; ++k) {
        m[k] = settings.beta1 * m[k] + (1 - settings.beta1) * grad[k];
        v[k] = settings.beta2 * v[k] + (1 - settings.beta2) * grad[k] * grad[k];
        theta[k] -= settings.learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + settings.adam_epsilon);
      }
    } else {
      for (std::size_t k = 0; k < dim; ++k) theta[k] -= settings.learning_rate * grad[k];
    }
  }
  return trace;
}

}  // namespace vcem
