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

#include "vcem/vcem.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "vcem/analytic_ghz.hpp"
#include "vcem/cost.hpp"
#include "vcem/error.hpp"
#include "vcem/experiments.hpp"

struct vcem_circuit {
  vcem::Graph graph;
  vcem::ParamCircuit circuit;
  vcem::StabilizerSet stabilizers;
  vcem::NoiseLayout layout;
};

struct vcem_config {
  vcem::exp::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

vcem_status to_status(vcem::ErrorKind kind) {
  switch (kind) {
    case vcem::ErrorKind::InvalidArgument: return VCEM_ERR_INVALID_ARGUMENT;
    case vcem::ErrorKind::SizeMismatch: return VCEM_ERR_SIZE_MISMATCH;
    case vcem::ErrorKind::Config: return VCEM_ERR_CONFIG;
    case vcem::ErrorKind::ResourceLimit: return VCEM_ERR_RESOURCE_LIMIT;
    case vcem::ErrorKind::Numeric: return VCEM_ERR_NUMERIC;
    case vcem::ErrorKind::Io: return VCEM_ERR_IO;
  }
  return VCEM_ERR_INTERNAL;
}

template <class F>
vcem_status guarded(F &&body) {
  try {
    body();
    return VCEM_OK;
  } catch (const vcem::Error &e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return VCEM_ERR_RESOURCE_LIMIT;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return VCEM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return VCEM_ERR_INTERNAL;
  }
}

void need(const void *p, const char *what) {
  vcem::require(p != nullptr, vcem::ErrorKind::InvalidArgument, std::string(what) + " must not be NULL");
}

std::span<const double> params(const vcem_circuit *c, const double *theta, size_t len) {
  need(c, "circuit");
  need(theta, "theta");
  vcem::require(len == c->circuit.num_params(), vcem::ErrorKind::SizeMismatch,
                "expected " + std::to_string(c->circuit.num_params()) + " parameters, got " + std::to_string(len));
  return {theta, len};
}

char *copy_string(const std::string &s) {
  char *out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

vcem::ghz::Scenario scenario(vcem_ghz_variant variant, double theta, double epsilon) {
  vcem::require(variant >= VCEM_GHZ_NOISELESS && variant <= VCEM_GHZ_PER_MOMENT_PAULI,
                vcem::ErrorKind::InvalidArgument, "unknown GHZ variant");
  vcem::ghz::Scenario s;
  s.variant = static_cast<vcem::ghz::Variant>(variant);
  s.theta = theta;
  s.epsilon = epsilon;
  return s;
}

nlohmann::json summarize(const vcem::exp::ExperimentConfig &cfg, vcem_progress_fn progress, void *user) {
  using namespace vcem::exp;
  nlohmann::json j{{"experiment", experiment_name(cfg.experiment)}};
  switch (cfg.experiment) {
    case Experiment::Optimize: {
      vcem::IterationCallback cb;
      if (progress) cb = [&](const vcem::IterationRecord &r) { progress(r.iter, r.cost, r.grad_norm, user); };
      const auto r = run_optimize(cfg, cb);
      j["iterations"] = r.trace.iterations.size();
      j["converged"] = r.trace.converged;
      j["final_cost"] = r.trace.final_cost;
      j["final_grad_norm"] = r.trace.final_grad_norm;
      j["max_abs_theta_plus_epsilon"] = r.max_abs_residual;
      j["seconds"] = r.seconds;
      break;
    }
    case Experiment::DeltaScaling: {
      const auto r = run_delta_scaling(cfg);
      j["eps_slope"] = r.eps_fit.slope;
      j["eps_r_squared"] = r.eps_fit.r_squared;
      j["n_slope"] = r.n_fit.slope;
      j["n_intercept"] = r.n_fit.intercept;
      j["n_r_squared"] = r.n_fit.r_squared;
      break;
    }
    case Experiment::GhzLandscape: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto &v : run_ghz_landscape(cfg)) {
        arr.push_back({{"variant", vcem::ghz::variant_name(v.variant)},
                       {"max_abs_difference", v.max_abs_difference},
                       {"max_abs_delta", v.max_abs_delta},
                       {"argmin_theta", v.argmin_theta}});
      }
      j["variants"] = arr;
      break;
    }
    case Experiment::TwirlDemo: {
      const auto r = run_twirl_demo(cfg);
      j["gamma"] = r.gamma;
      j["pauli_residual_before"] = r.residual_before;
      j["pauli_residual_after"] = r.residual_after;
      j["clifford_p"] = r.clifford_p;
      j["clifford_p_closed_form"] = r.clifford_p_closed_form;
      j["depolarizing_residual"] = r.depolarizing_residual;
      break;
    }
  }
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j;
}

}  // namespace

extern "C" {

const char *vcem_version(void) { return vcem::exp::kToolVersion; }

const char *vcem_last_error(void) { return g_last_error.c_str(); }

const char *vcem_status_name(vcem_status status) {
  switch (status) {
    case VCEM_OK: return "ok";
    case VCEM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case VCEM_ERR_SIZE_MISMATCH: return "size mismatch";
    case VCEM_ERR_CONFIG: return "configuration error";
    case VCEM_ERR_RESOURCE_LIMIT: return "resource limit exceeded";
    case VCEM_ERR_NUMERIC: return "numerical failure";
    case VCEM_ERR_IO: return "i/o error";
    case VCEM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

vcem_status vcem_circuit_create(const char *graph_spec, double coh_mag, uint64_t seed_coh, vcem_circuit **out) {
  return guarded([&] {
    need(graph_spec, "graph_spec");
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<vcem_circuit>();
    h->graph = vcem::parse_graph_spec(graph_spec);
    h->circuit = vcem::transpile(vcem::build_graph_circuit(h->graph));
    h->circuit.set_epsilons(vcem::sample_coherent_errors(h->circuit, coh_mag, seed_coh));
    h->circuit.coherent_seed = seed_coh;
    h->stabilizers = vcem::graph_stabilizers(h->graph);
    h->layout = vcem::NoiseLayout::noiseless(h->circuit.num_moments());
    *out = h.release();
  });
}

void vcem_circuit_destroy(vcem_circuit *circuit) { delete circuit; }

vcem_status vcem_circuit_info(const vcem_circuit *circuit, size_t *num_qubits, size_t *num_params,
                              size_t *num_moments) {
  return guarded([&] {
    need(circuit, "circuit");
    if (num_qubits) *num_qubits = circuit->circuit.num_qubits();
    if (num_params) *num_params = circuit->circuit.num_params();
    if (num_moments) *num_moments = circuit->circuit.num_moments();
  });
}

vcem_status vcem_circuit_epsilons(const vcem_circuit *circuit, double *out, size_t len) {
  return guarded([&] {
    need(circuit, "circuit");
    need(out, "out");
    const auto &eps = circuit->circuit.epsilons();
    vcem::require(len == eps.size(), vcem::ErrorKind::SizeMismatch, "epsilon buffer has the wrong length");
    std::copy(eps.begin(), eps.end(), out);
  });
}

vcem_status vcem_circuit_set_epsilons(vcem_circuit *circuit, const double *eps, size_t len) {
  return guarded([&] {
    const auto e = params(circuit, eps, len);
    circuit->circuit.set_epsilons({e.begin(), e.end()});
  });
}

vcem_status vcem_circuit_set_noise(vcem_circuit *circuit, const char *noise_spec, uint64_t seed_inc) {
  return guarded([&] {
    need(circuit, "circuit");
    need(noise_spec, "noise_spec");
    circuit->layout = vcem::build_noise_layout(vcem::parse_noise_spec(noise_spec), circuit->circuit, seed_inc);
  });
}

vcem_status vcem_cost(const vcem_circuit *circuit, const double *theta, size_t len, double *out) {
  return guarded([&] {
    const auto t = params(circuit, theta, len);
    need(out, "out");
    *out = circuit->layout.empty() ? vcem::cost(circuit->circuit, t, circuit->stabilizers).total
                                   : vcem::noisy_cost(circuit->circuit, t, circuit->layout, circuit->stabilizers).total;
  });
}

vcem_status vcem_gradient(const vcem_circuit *circuit, const double *theta, size_t len, vcem_gradient_method method,
                          double *grad_out) {
  return guarded([&] {
    const auto t = params(circuit, theta, len);
    need(grad_out, "grad_out");
    vcem::require(method == VCEM_GRADIENT_PARAMETER_SHIFT || method == VCEM_GRADIENT_ADJOINT,
                  vcem::ErrorKind::InvalidArgument, "unknown gradient method");
    std::unique_ptr<vcem::CostEvaluator> f;
    if (circuit->layout.empty()) {
      f = std::make_unique<vcem::PureCost>(circuit->circuit, circuit->stabilizers);
    } else {
      f = std::make_unique<vcem::NoisyCost>(circuit->circuit, circuit->layout, circuit->stabilizers);
    }
    f->method = method == VCEM_GRADIENT_ADJOINT ? vcem::GradientMethod::Adjoint : vcem::GradientMethod::ParameterShift;
    const auto g = f->gradient(t);
    std::copy(g.begin(), g.end(), grad_out);
  });
}

vcem_status vcem_delta_cost(const vcem_circuit *circuit, const double *theta, size_t len, double *out) {
  return guarded([&] {
    const auto t = params(circuit, theta, len);
    need(out, "out");
    *out = vcem::delta_cost(circuit->circuit, t, circuit->layout, circuit->stabilizers);
  });
}

vcem_status vcem_ghz_analytic_cost(vcem_ghz_variant variant, double theta, double epsilon, double *out) {
  return guarded([&] {
    need(out, "out");
    *out = vcem::ghz::analytic_cost(scenario(variant, theta, epsilon));
  });
}

vcem_status vcem_ghz_simulated_cost(vcem_ghz_variant variant, double theta, double epsilon, double *out) {
  return guarded([&] {
    need(out, "out");
    *out = vcem::ghz::simulated_cost(scenario(variant, theta, epsilon));
  });
}

vcem_status vcem_config_create(const char *experiment, vcem_config **out) {
  return guarded([&] {
    need(experiment, "experiment");
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<vcem_config>();
    h->cfg = vcem::exp::default_config(vcem::exp::parse_experiment(experiment));
    *out = h.release();
  });
}

void vcem_config_destroy(vcem_config *config) { delete config; }

vcem_status vcem_config_set(vcem_config *config, const char *key, const char *value) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(value, "value");
    vcem::exp::apply_setting(config->cfg, key, value);
  });
}

vcem_status vcem_config_load(vcem_config *config, const char *path) {
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    vcem::exp::apply_config_file(config->cfg, path);
  });
}

vcem_status vcem_config_text(const vcem_config *config, char **out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = copy_string(vcem::exp::to_config_text(config->cfg));
  });
}

vcem_status vcem_run(const vcem_config *config, vcem_progress_fn progress, void *user, char **summary_json) {
  return guarded([&] {
    need(config, "config");
    need(summary_json, "summary_json");
    *summary_json = nullptr;
    *summary_json = copy_string(summarize(config->cfg, progress, user).dump(2));
  });
}

void vcem_string_free(char *s) { delete[] s; }

}  // extern "C"
