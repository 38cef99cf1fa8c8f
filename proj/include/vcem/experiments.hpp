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

// Reproducible experiment drivers. Each runner takes a fully defaulted
// ExperimentConfig, writes its data files into `config.out` (when non-empty)
// and returns the computed results so callers can inspect them directly.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vcem/analytic_ghz.hpp"
#include "vcem/cost.hpp"
#include "vcem/optimizer.hpp"

namespace vcem::exp {

inline constexpr const char *kToolVersion = "0.1.0";

enum class Experiment { Optimize, DeltaScaling, GhzLandscape, TwirlDemo };

const char *experiment_name(Experiment e);
Experiment parse_experiment(const std::string &name);

struct ExperimentConfig {
  Experiment experiment = Experiment::Optimize;
  std::string graph = "grid:2x5";
  std::string noise = "none";
  double coh_mag = 0.01;
  std::uint64_t seed_coh = 1;
  std::uint64_t seed_inc = 2;
  OptimizerSettings optimizer;
  GradientMethod gradient = GradientMethod::Adjoint;
  std::string out;

  std::vector<double> eps_sweep;
  std::vector<std::size_t> n_sweep;
  double n_sweep_eps = 0.05;
  bool allow_large = false;

  std::vector<ghz::Variant> variants;
  double ghz_epsilon = 0.5;
  std::size_t ghz_points = 101;

  double gamma = 0.1;

  /// Worker threads for sweeps; 0 picks the hardware concurrency.
  std::size_t threads = 0;
};

/// Defaults for one experiment (the delta-scaling run starts on line:10 with
/// per-moment 1+2-local Pauli noise).
ExperimentConfig default_config(Experiment e);

/// Sets one key; throws a Config error for unknown keys or malformed values.
void apply_setting(ExperimentConfig &cfg, const std::string &key, const std::string &value);
/// Reads `key = value` lines ('#' starts a comment) into `cfg`.
void apply_config_file(ExperimentConfig &cfg, const std::filesystem::path &path);
/// Serializes every key so that feeding the text back reproduces `cfg` exactly.
std::string to_config_text(const ExperimentConfig &cfg);

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::vector<double> x;
  std::vector<double> y;
};

/// Ordinary least squares y = slope * x + intercept; needs at least 4 points.
FitResult fit_line(std::vector<double> x, std::vector<double> y);

struct OptimizeResult {
  OptimizationTrace trace;
  std::vector<double> epsilons;
  std::vector<std::string> keys;
  double max_abs_residual = 0;
  double seconds = 0;
};

struct DeltaPoint {
  double x = 0;
  double delta = 0;
};

struct DeltaScalingResult {
  std::vector<DeltaPoint> eps_points;
  std::vector<DeltaPoint> n_points;
  FitResult eps_fit;
  FitResult n_fit;
};

struct GhzRow {
  double theta = 0;
  double analytic = 0;
  double simulated = 0;
  double delta = 0;
};

struct GhzVariantResult {
  ghz::Variant variant = ghz::Variant::Noiseless;
  std::vector<GhzRow> rows;
  double max_abs_difference = 0;
  double max_abs_delta = 0;
  double argmin_theta = 0;
};

struct TwirlResult {
  double gamma = 0;
  PauliChannel pauli_twirled = PauliChannel::identity(1);
  double residual_before = 0;
  double residual_after = 0;
  double clifford_p = 0;
  double clifford_p_closed_form = 0;
  double depolarizing_residual = 0;
};

OptimizeResult run_optimize(const ExperimentConfig &cfg, const IterationCallback &progress = {});
DeltaScalingResult run_delta_scaling(const ExperimentConfig &cfg);
std::vector<GhzVariantResult> run_ghz_landscape(const ExperimentConfig &cfg);
TwirlResult run_twirl_demo(const ExperimentConfig &cfg);

/// Delta cost at theta = 0 for `graph`, coherent errors of magnitude `eps`
/// and noise drawn from `noise` with `seed_inc`.
double delta_at_zero(const std::string &graph, const std::string &noise, double eps, std::uint64_t seed_coh,
                     std::uint64_t seed_inc);

}  // namespace vcem::exp
