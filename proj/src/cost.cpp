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

#include "vcem/cost.hpp"

#include <cmath>
#include <numbers>

#include "vcem/error.hpp"
#include "vcem/simulator.hpp"

namespace vcem {

namespace {

void check_stabilizers(const ParamCircuit &c, const StabilizerSet &stabs) {
  require(stabs.num_qubits() == c.num_qubits(), ErrorKind::SizeMismatch,
          "stabilizer set acts on " + std::to_string(stabs.num_qubits()) + " qubits but the circuit has " +
              std::to_string(c.num_qubits()));
}

CostReport make_report(std::vector<double> per) {
  CostReport r;
  for (double v : per) r.total += v;
  r.per_stabilizer = std::move(per);
  return r;
}

std::vector<double> pure_terms(const ParamCircuit &c, std::span<const double> angles, const StabilizerSet &stabs) {
  StateVector psi = run_pure_angles(c, angles);
  std::vector<double> per;
  per.reserve(stabs.size());
  for (const auto &s : stabs.generators) per.push_back(-expectation(psi, s));
  return per;
}

std::vector<double> noisy_terms(const ParamCircuit &c, std::span<const double> angles, const NoiseLayout &layout,
                                const StabilizerSet &stabs) {
  require(c.num_qubits() <= kMaxNoisyQubits, ErrorKind::ResourceLimit, "register exceeds the density-matrix ceiling");
  DensityMatrix rho = run_noisy_angles(c, angles, layout);
  std::vector<double> per;
  per.reserve(stabs.size());
  for (const auto &s : stabs.generators) per.push_back(-expectation(rho, s));
  return per;
}

std::vector<double> per_key(const ParamCircuit &c, const std::vector<double> &per_gate) {
  std::vector<double> out(c.num_params(), 0.0);
  for (std::size_t g = 0; g < c.num_gates(); ++g) out[c.gate(g).param] += per_gate[g];
  return out;
}

std::vector<double> negated_weights(std::size_t count, std::span<const double> scale = {}) {
  std::vector<double> w(count);
  for (std::size_t i = 0; i < count; ++i) w[i] = -(scale.empty() ? 1.0 : scale[i]);
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------

CostReport CostEvaluator::report(std::span<const double> theta) const {
  auto angles = gate_angles(circuit(), theta);
  CostReport r = report_angles(angles);
  r.theta.assign(theta.begin(), theta.end());
  return r;
}

std::vector<double> CostEvaluator::gradient(std::span<const double> theta) const {
  return parameter_shift_gradient(*this, theta);
}

ValueAndGradient CostEvaluator::value_and_gradient(std::span<const double> theta) const {
  return {value(theta), gradient(theta)};
}

PureCost::PureCost(ParamCircuit c, StabilizerSet stabs) : c_(std::move(c)), stabs_(std::move(stabs)) {
  check_stabilizers(c_, stabs_);
  require(c_.num_qubits() <= kMaxPureQubits, ErrorKind::ResourceLimit, "register exceeds the statevector ceiling");
}

CostReport PureCost::report_angles(std::span<const double> angles) const {
  return make_report(pure_terms(c_, angles, stabs_));
}

ValueAndGradient PureCost::value_and_gradient(std::span<const double> theta) const {
  if (method == GradientMethod::ParameterShift) return CostEvaluator::value_and_gradient(theta);
  auto w = negated_weights(stabs_.size());
  return adjoint_gradient_pure(c_, theta, stabs_.generators, w);
}

std::vector<double> PureCost::gradient(std::span<const double> theta) const {
  if (method == GradientMethod::ParameterShift) return parameter_shift_gradient(*this, theta);
  auto w = negated_weights(stabs_.size());
  return adjoint_gradient_pure(c_, theta, stabs_.generators, w).gradient;
}

NoisyCost::NoisyCost(ParamCircuit c, NoiseLayout layout, StabilizerSet stabs)
    : c_(std::move(c)), layout_(std::move(layout)), stabs_(std::move(stabs)) {
  check_stabilizers(c_, stabs_);
  layout_.check_aligned(c_);
  require(c_.num_qubits() <= kMaxNoisyQubits, ErrorKind::ResourceLimit, "register exceeds the density-matrix ceiling");
}

CostReport NoisyCost::report_angles(std::span<const double> angles) const {
  return make_report(noisy_terms(c_, angles, layout_, stabs_));
}

ValueAndGradient NoisyCost::value_and_gradient(std::span<const double> theta) const {
  if (method == GradientMethod::ParameterShift) return CostEvaluator::value_and_gradient(theta);
  auto w = negated_weights(stabs_.size());
  return adjoint_gradient_noisy(c_, theta, layout_, stabs_.generators, w);
}

std::vector<double> NoisyCost::gradient(std::span<const double> theta) const {
  if (method == GradientMethod::ParameterShift) return parameter_shift_gradient(*this, theta);
  auto w = negated_weights(stabs_.size());
  return adjoint_gradient_noisy(c_, theta, layout_, stabs_.generators, w).gradient;
}

ChiScaledCost::ChiScaledCost(ParamCircuit c, std::vector<double> chi, StabilizerSet stabs)
    : c_(std::move(c)), chi_(std::move(chi)), stabs_(std::move(stabs)) {
  check_stabilizers(c_, stabs_);
  require(chi_.size() == stabs_.size(), ErrorKind::SizeMismatch, "one chi factor per stabilizer is required");
}

ChiScaledCost::ChiScaledCost(ParamCircuit c, const PauliChannel &end_channel, StabilizerSet stabs)
    : c_(std::move(c)), stabs_(std::move(stabs)) {
  check_stabilizers(c_, stabs_);
  require(end_channel.num_qubits() == c_.num_qubits(), ErrorKind::SizeMismatch,
          "end channel register does not match the circuit");
  for (const auto &s : stabs_.generators) chi_.push_back(chi_factor(end_channel, s));
}

CostReport ChiScaledCost::report_angles(std::span<const double> angles) const {
  auto per = pure_terms(c_, angles, stabs_);
  for (std::size_t i = 0; i < per.size(); ++i) per[i] *= chi_[i];
  return make_report(std::move(per));
}

std::vector<double> ChiScaledCost::gradient(std::span<const double> theta) const {
  if (method == GradientMethod::ParameterShift) return parameter_shift_gradient(*this, theta);
  auto w = negated_weights(stabs_.size(), chi_);
  return adjoint_gradient_pure(c_, theta, stabs_.generators, w).gradient;
}

DeltaCost::DeltaCost(ParamCircuit c, NoiseLayout layout, StabilizerSet stabs)
    : c_(std::move(c)), layout_(std::move(layout)), stabs_(std::move(stabs)) {
  check_stabilizers(c_, stabs_);
  layout_.check_aligned(c_);
  require(layout_.all_pauli(), ErrorKind::InvalidArgument, "delta cost requires a layout of Pauli channels only");
  require(c_.num_qubits() <= kMaxNoisyQubits, ErrorKind::ResourceLimit, "register exceeds the density-matrix ceiling");
  chi_ = effective_chi_factors(layout_, c_, stabs_.generators);
}

CostReport DeltaCost::report_angles(std::span<const double> angles) const {
  auto noisy = noisy_terms(c_, angles, layout_, stabs_);
  auto pure = pure_terms(c_, angles, stabs_);
  for (std::size_t i = 0; i < noisy.size(); ++i) noisy[i] -= chi_[i] * pure[i];
  return make_report(std::move(noisy));
}

std::vector<double> DeltaCost::gradient(std::span<const double> theta) const {
  if (method == GradientMethod::ParameterShift) return parameter_shift_gradient(*this, theta);
  auto wn = negated_weights(stabs_.size());
  auto wp = negated_weights(stabs_.size(), chi_);
  auto g = adjoint_gradient_noisy(c_, theta, layout_, stabs_.generators, wn).gradient;
  auto gp = adjoint_gradient_pure(c_, theta, stabs_.generators, wp).gradient;
  for (std::size_t k = 0; k < g.size(); ++k) g[k] -= gp[k];
  return g;
}

// ---------------------------------------------------------------------------

CostReport cost(const ParamCircuit &c, std::span<const double> theta, const StabilizerSet &stabs) {
  return PureCost(c, stabs).report(theta);
}

CostReport noisy_cost(const ParamCircuit &c, std::span<const double> theta, const NoiseLayout &layout,
                      const StabilizerSet &stabs) {
  return NoisyCost(c, layout, stabs).report(theta);
}

CostReport chi_scaled_cost(const ParamCircuit &c, std::span<const double> theta, const PauliChannel &end_channel,
                           const StabilizerSet &stabs) {
  return ChiScaledCost(c, end_channel, stabs).report(theta);
}

double delta_cost(const ParamCircuit &c, std::span<const double> theta, const NoiseLayout &layout,
                  const StabilizerSet &stabs) {
  return DeltaCost(c, layout, stabs).value(theta);
}

std::vector<double> parameter_shift_gradient(const CostEvaluator &f, std::span<const double> theta) {
  require(f.pauli_generators(), ErrorKind::InvalidArgument,
          "parameter shift needs half-angle Pauli generators; this evaluator has a non-Pauli generator");
  const ParamCircuit &c = f.circuit();
  auto angles = gate_angles(c, theta);
  std::vector<double> per_gate(c.num_gates());
  constexpr double kShift = std::numbers::pi / 2;
  for (std::size_t g = 0; g < c.num_gates(); ++g) {
    const double base = angles[g];
    angles[g] = base + kShift;
    const double plus = f.report_angles(angles).total;
    angles[g] = base - kShift;
    const double minus = f.report_angles(angles).total;
    angles[g] = base;
    per_gate[g] = 0.5 * (plus - minus);
  }
  return per_key(c, per_gate);
}

ValueAndGradient adjoint_gradient_pure(const ParamCircuit &c, std::span<const double> theta,
                                       std::span<const PauliString> observables, std::span<const double> weights) {
  require(observables.size() == weights.size(), ErrorKind::SizeMismatch, "one weight per observable is required");
  auto angles = gate_angles(c, theta);
  const std::size_t n = c.num_qubits();
  StateVector psi = run_pure_angles(c, angles);

  // lambda = O psi, using exp(-i pi/2 s) = -i s.
  StateVector lambda(n);
  auto &la = lambda.amplitudes();
  std::fill(la.begin(), la.end(), Complex(0, 0));
  ValueAndGradient out;
  for (std::size_t i = 0; i < observables.size(); ++i) {
    const auto &s = observables[i];
    require(s.size() == n, ErrorKind::SizeMismatch, "observable size mismatch");
    StateVector tmp = psi;
    tmp.apply_rotation(s, std::numbers::pi);
    const auto &ta = tmp.amplitudes();
    for (std::size_t j = 0; j < la.size(); ++j) la[j] += weights[i] * Complex(0, 1) * ta[j];
    out.value += weights[i] * expectation(psi, s);
  }

  std::vector<double> per_gate(c.num_gates(), 0.0);
  std::size_t flat = c.num_gates();
  for (std::size_t q = c.num_moments(); q-- > 0;) {
    const auto &gates = c.moments()[q].gates;
    flat -= gates.size();
    for (std::size_t k = 0; k < gates.size(); ++k) {
      // d<O>/dphi = Im <lambda| P |psi_q> with P psi = i exp(-i pi/2 P) psi.
      StateVector ppsi = psi;
      ppsi.apply_rotation(gates[k].generator(n), std::numbers::pi);
      Complex acc = 0;
      const auto &pa = ppsi.amplitudes();
      for (std::size_t j = 0; j < la.size(); ++j) acc += std::conj(la[j]) * pa[j];
      per_gate[flat + k] = (Complex(0, 1) * acc).imag();
    }
    unapply_moment(psi, c, q, angles);
    unapply_moment(lambda, c, q, angles);
  }
  out.gradient = per_key(c, per_gate);
  return out;
}

ValueAndGradient adjoint_gradient_noisy(const ParamCircuit &c, std::span<const double> theta,
                                        const NoiseLayout &layout, std::span<const PauliString> observables,
                                        std::span<const double> weights, std::size_t memory_budget_bytes) {
  require(observables.size() == weights.size(), ErrorKind::SizeMismatch, "one weight per observable is required");
  layout.check_aligned(c);
  auto angles = gate_angles(c, theta);
  const std::size_t n = c.num_qubits();
  const std::size_t moments = c.num_moments();
  ValueAndGradient out;
  out.gradient.assign(c.num_params(), 0.0);

  const std::size_t state_bytes = sizeof(Complex) << (2 * n);
  const std::size_t affordable = std::max<std::size_t>(memory_budget_bytes / state_bytes, 4);
  std::size_t stride = 1;
  while (stride < moments && (moments + stride - 1) / stride + stride + 2 > affordable) ++stride;
  const bool store_all = moments + 2 <= affordable;

  // Either every post-unitary state, or checkpoints before moments that are multiples of `stride`.
  std::vector<DensityMatrix> stored;
  DensityMatrix rho(n);
  for (std::size_t q = 0; q < moments; ++q) {
    if (!store_all && q % stride == 0) stored.push_back(rho);
    apply_moment(rho, c, q, angles);
    if (store_all) stored.push_back(rho);
    for (const auto &ch : layout.moments[q]) rho.apply_channel(ch);
  }
  for (std::size_t i = 0; i < observables.size(); ++i) out.value += weights[i] * expectation(rho, observables[i]);
  if (moments == 0) return out;

  DensityMatrix o = DensityMatrix::from_pauli_sum(n, observables, weights);
  std::vector<double> per_gate(c.num_gates(), 0.0);
  std::vector<std::size_t> first_flat(moments + 1, 0);
  for (std::size_t q = 0; q < moments; ++q) first_flat[q + 1] = first_flat[q] + c.moments()[q].gates.size();

  const std::size_t seg_len = store_all ? moments : stride;
  const std::size_t segments = (moments + seg_len - 1) / seg_len;
  for (std::size_t seg = segments; seg-- > 0;) {
    const std::size_t begin = seg * seg_len;
    const std::size_t end = std::min(moments, begin + seg_len);
    std::vector<DensityMatrix> recomputed;
    if (!store_all) {
      DensityMatrix cur = std::move(stored[seg]);
      stored[seg] = DensityMatrix(0);
      for (std::size_t q = begin; q < end; ++q) {
        apply_moment(cur, c, q, angles);
        recomputed.push_back(cur);
        if (q + 1 < end) {
          for (const auto &ch : layout.moments[q]) cur.apply_channel(ch);
        }
      }
    }
    for (std::size_t q = end; q-- > begin;) {
      // Pauli and depolarizing channels are self-adjoint.
      for (const auto &ch : layout.moments[q]) o.apply_channel(ch);
      const auto &gates = c.moments()[q].gates;
      std::vector<PauliString> generators;
      for (const auto &g : gates) generators.push_back(g.generator(n));
      const DensityMatrix &rq = store_all ? stored[q] : recomputed[q - begin];
      auto traces = trace_products(o, generators, rq);
      for (std::size_t k = 0; k < gates.size(); ++k) per_gate[first_flat[q] + k] = traces[k].imag();
      if (store_all) stored[q] = DensityMatrix(0);
      unapply_moment(o, c, q, angles);
    }
  }
  out.gradient = per_key(c, per_gate);
  return out;
}

std::vector<double> finite_difference_gradient(const ScalarFunction &f, std::span<const double> theta, double step) {
  require(step > 0, ErrorKind::InvalidArgument, "finite-difference step must be positive");
  std::vector<double> x(theta.begin(), theta.end());
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double base = x[k];
    x[k] = base + step;
    const double plus = f(x);
    x[k] = base - step;
    const double minus = f(x);
    x[k] = base;
    g[k] = (plus - minus) / (2 * step);
  }
  return g;
}

Eigen::MatrixXd hessian_fd(const ScalarFunction &f, std::span<const double> theta, double step) {
  require(step > 0, ErrorKind::InvalidArgument, "Hessian step must be positive");
  std::vector<double> x(theta.begin(), theta.end());
  const auto dim = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd h(dim, dim);
  const double f0 = f(x);
  auto eval = [&](std::size_t k, double dk, std::size_t l, double dl) {
    const double xk = x[k], xl = x[l];
    x[k] += dk;
    x[l] += dl;
    const double v = f(x);
    x[k] = xk;
    x[l] = xl;
    return v;
  };
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto ki = static_cast<Eigen::Index>(k);
    h(ki, ki) = (eval(k, step, k, 0) - 2 * f0 + eval(k, -step, k, 0)) / (step * step);
    for (std::size_t l = k + 1; l < x.size(); ++l) {
      const auto li = static_cast<Eigen::Index>(l);
      const double v = (eval(k, step, l, step) - eval(k, step, l, -step) - eval(k, -step, l, step) +
                        eval(k, -step, l, -step)) /
                       (4 * step * step);
      h(ki, li) = v;
      h(li, ki) = v;
    }
  }
  return 0.5 * (h + h.transpose());
}

double euclidean_norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace vcem
