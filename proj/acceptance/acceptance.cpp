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

// Release checks. Prints one PASS/FAIL line per criterion and exits non-zero
// if any fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vcem/analytic_ghz.hpp"
#include "vcem/cost.hpp"
#include "vcem/experiments.hpp"
#include "vcem/noise.hpp"
#include "vcem/optimizer.hpp"
#include "vcem/simulator.hpp"

namespace {

using namespace vcem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char *f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> uniform(std::mt19937_64 &rng, std::size_t k, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(k);
  for (auto &x : v) x = u(rng);
  return v;
}

Graph random_connected_graph(std::mt19937_64 &rng, std::size_t n) {
  Graph g = Graph::line(n);
  std::bernoulli_distribution extra(0.3);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 2; b < n; ++b)
      if (extra(rng)) g.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  return g;
}

PauliChannel random_full_channel(std::mt19937_64 &rng, std::size_t n) {
  std::vector<std::pair<double, std::string>> terms;
  std::vector<double> w = uniform(rng, std::size_t{1} << (2 * n), 0.0, 1.0);
  w[0] += static_cast<double>(w.size()) * 0.5;
  double total = 0;
  for (double x : w) total += x;
  const auto all = all_pauli_strings(n);
  for (std::size_t k = 0; k < all.size(); ++k) terms.emplace_back(w[k] / total, all[k].letters());
  return PauliChannel::from_labels(terms);
}

std::vector<double> negated(const std::vector<double> &v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return -x; });
  return out;
}

Outcome optimize_grid(const std::string &noise, double max_seconds, bool noisy) {
  auto cfg = exp::default_config(exp::Experiment::Optimize);
  cfg.graph = "grid:2x5";
  cfg.noise = noise;
  cfg.coh_mag = 0.01;
  if (noisy) cfg.optimizer.max_iters = 600;
  const auto r = exp::run_optimize(cfg);
  const std::size_t iters = r.trace.iterations.size() - 1;
  Outcome o;
  o.detail = "iterations " + std::to_string(iters) + fmt(", cost %.10f", r.trace.final_cost) +
             fmt(", |theta+eps|_inf %.2e", r.max_abs_residual) + fmt(", |grad| %.2e", r.trace.final_grad_norm) +
             fmt(", %.1f s", r.seconds);
  if (noisy) {
    o.pass = r.max_abs_residual < 1e-3 && r.trace.final_grad_norm < 1e-6 && r.seconds < max_seconds;
  } else {
    o.pass = std::abs(r.trace.final_cost + 10) < 1e-4 && r.max_abs_residual < 1e-3 && iters < 500 &&
             r.seconds < max_seconds;
  }
  return o;
}

Outcome criterion1() { return optimize_grid("none", 60, false); }

Outcome criterion2() { return optimize_grid("pauli:m=1+2,mag=0.01", 1800, true); }

Outcome criterion3() {
  std::mt19937_64 rng(301);
  double worst = 0;
  for (int draw = 0; draw < 100; ++draw) {
    const std::size_t n = 2 + draw % 3;
    const Graph g = random_connected_graph(rng, n);
    auto c = transpile(build_graph_circuit(g));
    c.set_epsilons(uniform(rng, c.num_params(), -0.05, 0.05));
    const auto stabs = graph_stabilizers(g);
    const auto end = random_full_channel(rng, n);
    NoiseLayout layout = NoiseLayout::noiseless(c.num_moments());
    layout.moments.back().push_back(end);
    const auto theta = uniform(rng, c.num_params(), -std::numbers::pi, std::numbers::pi);
    const double noisy = noisy_cost(c, theta, layout, stabs).total;
    const double scaled = chi_scaled_cost(c, theta, end, stabs).total;
    worst = std::max(worst, std::abs(noisy - scaled));
  }
  return {worst < 1e-12, fmt("max |noisy - sum chi_i C_i| = %.2e over 100 draws", worst)};
}

Outcome criterion4() {
  std::mt19937_64 rng(401);
  double worst = 0;
  for (int draw = 0; draw < 30; ++draw) {
    const std::size_t n = 2 + draw % 5;
    const Graph g = random_connected_graph(rng, n);
    auto c = transpile(build_graph_circuit(g));
    c.set_epsilons(uniform(rng, c.num_params(), -0.05, 0.05));
    const auto stabs = graph_stabilizers(g);
    NoiseLayout layout;
    std::vector<double> ps = uniform(rng, c.num_moments(), 0.0, 0.3);
    for (double p : ps) layout.moments.push_back({DepolarizingChannel{n, p}});
    const auto theta = uniform(rng, c.num_params(), -std::numbers::pi, std::numbers::pi);
    const double noisy = noisy_cost(c, theta, layout, stabs).total;
    const double expected = (1 - compose_depolarizing(ps)) * cost(c, theta, stabs).total;
    worst = std::max(worst, std::abs(noisy - expected));
  }
  return {worst < 1e-10, fmt("max |noisy - (1-p')C| = %.2e over 30 draws, n = 2..6", worst)};
}

Outcome criterion5() {
  auto cfg = exp::default_config(exp::Experiment::GhzLandscape);
  cfg.ghz_points = 101;
  double worst = 0, delta = 0;
  for (const auto &v : exp::run_ghz_landscape(cfg)) {
    worst = std::max(worst, v.max_abs_difference);
    if (v.variant == ghz::Variant::PerMomentPauli) delta = v.max_abs_delta;
  }
  return {worst < 1e-12 && delta < 1e-12,
          fmt("max |closed form - simulation| = %.2e", worst) + fmt(", max |delta| = %.2e", delta)};
}

Outcome criterion6() {
  double worst = 0;
  int layouts = 0;
  for (const char *spec : {"pauli:m=1+2,mag=0.01", "pauli:m=1,mag=0.2"}) {
    for (int draw = 0; draw < 20; ++draw) {
      const std::size_t n = 4 + draw % 3;
      auto c = transpile(build_graph_circuit(Graph::line(n)));
      c.set_epsilons(sample_coherent_errors(c, 0.05, 600 + draw));
      DeltaCost f(c, build_noise_layout(parse_noise_spec(spec), c, 700 + draw), graph_stabilizers(Graph::line(n)));
      f.method = GradientMethod::Adjoint;
      worst = std::max(worst, euclidean_norm(f.gradient(negated(c.epsilons()))));
      ++layouts;
    }
  }
  return {worst < 1e-8, fmt("max |grad delta(-eps)| = %.2e over ", worst) + std::to_string(layouts) +
                            " layouts (mag 0.01 with m=1+2, mag 0.2 with m=1)"};
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  const auto cfg = exp::default_config(exp::Experiment::DeltaScaling);
  const auto r = exp::run_delta_scaling(cfg);
  const double secs = seconds_since(t0);
  const bool slope_ok = r.eps_fit.slope >= 1.9 && r.eps_fit.slope <= 2.1;
  const bool linear_ok = r.n_fit.r_squared > 0.99;
  std::string detail = fmt("eps slope %.4f", r.eps_fit.slope) + fmt(" (R^2 %.4f)", r.eps_fit.r_squared) +
                       (slope_ok ? " ok" : " out of range") + fmt(", |delta| vs n R^2 %.4f", r.n_fit.r_squared) +
                       (linear_ok ? " ok" : " below 0.99") + fmt(", %.1f s", secs);
  return {slope_ok && linear_ok && secs < 2700, detail};
}

Outcome criterion8() {
  const auto r = exp::run_twirl_demo(exp::default_config(exp::Experiment::TwirlDemo));
  return {r.residual_after < 1e-12 && r.depolarizing_residual < 1e-10,
          fmt("Pauli-twirl residual %.2e", r.residual_after) +
              fmt(", Clifford twirl vs 24-element average %.2e", r.depolarizing_residual) +
              fmt(", p = %.6f", r.clifford_p)};
}

Outcome criterion9() {
  std::mt19937_64 rng(901);
  double worst = 0;
  for (int draw = 0; draw < 50; ++draw) {
    const std::size_t n = 2 + draw % 4;
    const Graph g = random_connected_graph(rng, n);
    auto c = transpile(build_graph_circuit(g));
    c.set_epsilons(uniform(rng, c.num_params(), -0.1, 0.1));
    const auto stabs = graph_stabilizers(g);
    const auto theta = uniform(rng, c.num_params(), -std::numbers::pi, std::numbers::pi);
    std::unique_ptr<CostEvaluator> f;
    if (draw % 2 == 0) {
      f = std::make_unique<PureCost>(c, stabs);
    } else {
      f = std::make_unique<NoisyCost>(c, build_noise_layout(parse_noise_spec("pauli:m=1+2,mag=0.02"), c, 950 + draw),
                                      stabs);
    }
    const auto shift = parameter_shift_gradient(*f, theta);
    const auto fd = finite_difference_gradient([&](std::span<const double> t) { return f->value(t); }, theta);
    for (std::size_t k = 0; k < shift.size(); ++k) worst = std::max(worst, std::abs(shift[k] - fd[k]));
  }
  return {worst < 1e-6, fmt("max componentwise |shift - central difference| = %.2e over 50 instances", worst)};
}

Outcome criterion10() {
  std::mt19937_64 rng(1001);
  double lowest_margin = 1e300;
  int mismatches = 0, at_minimum = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    const std::size_t n = 2 + draw % 5;
    const Graph g = random_connected_graph(rng, n);
    auto c = transpile(build_graph_circuit(g));
    c.set_epsilons(uniform(rng, c.num_params(), -0.05, 0.05));
    const auto stabs = graph_stabilizers(g);
    const auto theta = draw % 10 == 0 ? negated(c.epsilons())
                                      : uniform(rng, c.num_params(), -std::numbers::pi, std::numbers::pi);
    const auto r = cost(c, theta, stabs);
    const double nn = static_cast<double>(n);
    lowest_margin = std::min(lowest_margin, r.total + nn);
    const bool cost_min = std::abs(r.total + nn) < 1e-10;
    const bool all_plus = std::all_of(r.per_stabilizer.begin(), r.per_stabilizer.end(),
                                      [](double ci) { return std::abs(ci + 1) < 1e-10; });
    mismatches += cost_min != all_plus;
    at_minimum += cost_min;
  }
  return {lowest_margin > -1e-12 && mismatches == 0 && at_minimum > 0,
          fmt("min (cost + n) = %.2e", lowest_margin) + ", " + std::to_string(at_minimum) +
              " draws at -n, " + std::to_string(mismatches) + " equality mismatches over 1000 draws"};
}

}  // namespace

int main(int argc, char **argv) {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"noiseless 2x5 grid convergence", criterion1},
      {"noisy 2x5 grid convergence", criterion2},
      {"chi rescaling of end-of-circuit Pauli noise", criterion3},
      {"per-moment depolarizing composition", criterion4},
      {"two-qubit GHZ closed forms", criterion5},
      {"stationarity of the remainder at theta = -eps", criterion6},
      {"remainder scaling in eps and n", criterion7},
      {"Pauli and Clifford twirling", criterion8},
      {"parameter-shift gradient vs finite differences", criterion9},
      {"cost lower bound -n and its equality case", criterion10},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception &e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d: %s  %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", criteria[k].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
