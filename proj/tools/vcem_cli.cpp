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

#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcem/vcem.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

int exit_code(vcem_status s) {
  switch (s) {
    case VCEM_OK: return kExitOk;
    case VCEM_ERR_CONFIG:
    case VCEM_ERR_INVALID_ARGUMENT: return kExitConfig;
    case VCEM_ERR_RESOURCE_LIMIT: return kExitResource;
    default: return kExitFailure;
  }
}

int report(vcem_status s) {
  std::fprintf(stderr, "vcem: %s: %s\n", vcem_status_name(s), vcem_last_error());
  return exit_code(s);
}

struct Flags {
  std::optional<std::string> config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> values;
  bool quiet = false;
};

/// Registers a flag whose value is forwarded to the config under `key`.
void forward(CLI::App *cmd, Flags &flags, const std::string &flag, const std::string &key, const std::string &help) {
  cmd->add_option_function<std::string>(
      flag, [&flags, key](const std::string &v) { flags.values[key] = v; }, help);
}

void add_common(CLI::App *cmd, Flags &flags) {
  forward(cmd, flags, "--graph", "graph", "graph spec: line:N, grid:RxC or an edge-list file");
  forward(cmd, flags, "--noise", "noise", "noise spec: none, depol:p=P, pauli:m=1|2|1+2,mag=M, optional end: prefix");
  forward(cmd, flags, "--coh-mag", "coh_mag", "coherent-error magnitude");
  forward(cmd, flags, "--seed-coh", "seed_coh", "seed of the coherent errors");
  forward(cmd, flags, "--seed-inc", "seed_inc", "seed of the incoherent channels");
  forward(cmd, flags, "--out", "out", "output directory");
  forward(cmd, flags, "--threads", "threads", "worker threads for sweeps (0 = all cores)");
  cmd->add_option("--config", flags.config_file, "key = value configuration file (flags take precedence)");
  cmd->add_option("--set", flags.sets, "extra key=value setting, repeatable");
  cmd->add_flag("--quiet", flags.quiet, "suppress progress output");
}

void on_progress(size_t iter, double cost, double grad_norm, void *) {
  if (iter % 25 == 0) std::fprintf(stderr, "iter %5zu  cost %.12f  |grad| %.3e\n", iter, cost, grad_norm);
}

int run(const std::string &experiment, const Flags &flags) {
  vcem_config *cfg = nullptr;
  vcem_status s = vcem_config_create(experiment.c_str(), &cfg);
  if (s != VCEM_OK) return report(s);
  std::unique_ptr<vcem_config, decltype(&vcem_config_destroy)> guard(cfg, &vcem_config_destroy);

  if (flags.config_file && (s = vcem_config_load(cfg, flags.config_file->c_str())) != VCEM_OK) return report(s);
  if ((s = vcem_config_set(cfg, "experiment", experiment.c_str())) != VCEM_OK) return report(s);
  for (const auto &kv : flags.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "vcem: --set expects key=value, got '%s'\n", kv.c_str());
      return kExitConfig;
    }
    if ((s = vcem_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str())) != VCEM_OK) return report(s);
  }
  for (const auto &[key, value] : flags.values) {
    if ((s = vcem_config_set(cfg, key.c_str(), value.c_str())) != VCEM_OK) return report(s);
  }

  char *summary = nullptr;
  s = vcem_run(cfg, flags.quiet ? nullptr : &on_progress, nullptr, &summary);
  if (s != VCEM_OK) return report(s);
  std::printf("%s\n", summary);
  vcem_string_free(summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Variational coherent-error mitigation experiments"};
  app.set_version_flag("--version", std::string(vcem_version()));
  app.require_subcommand(1);

  Flags flags;
  auto *opt = app.add_subcommand("optimize", "optimize a graph-state circuit from theta = 0");
  add_common(opt, flags);
  forward(opt, flags, "--max-iters", "max_iters", "iteration cap");
  forward(opt, flags, "--lr", "lr", "learning rate");
  forward(opt, flags, "--grad-tol", "grad_tol", "gradient-norm stopping tolerance");
  forward(opt, flags, "--gradient", "gradient", "adjoint or shift");

  auto *delta = app.add_subcommand("delta-scaling", "remainder at theta = 0 versus error magnitude and size");
  add_common(delta, flags);
  forward(delta, flags, "--eps-sweep", "eps_sweep", "comma-separated error magnitudes");
  forward(delta, flags, "--n-sweep", "n_sweep", "qubit counts, e.g. 4-10 or 4,6,8");
  forward(delta, flags, "--n-sweep-eps", "n_sweep_eps", "error magnitude used for the size sweep");
  delta->add_flag_function(
      "--allow-large", [&flags](std::int64_t) { flags.values["allow_large"] = "true"; },
      "permit sweep sizes up to 12 qubits");

  auto *ghz = app.add_subcommand("ghz-landscape", "two-qubit GHZ cost landscapes, closed form versus simulation");
  add_common(ghz, flags);
  forward(ghz, flags, "--variant", "variants", "comma-separated variants (default: all four)");
  forward(ghz, flags, "--epsilon", "ghz_epsilon", "coherent error of the CNOT");
  forward(ghz, flags, "--points", "ghz_points", "theta grid size over [-pi, pi]");

  auto *twirl = app.add_subcommand("twirl-demo", "Pauli and Clifford twirling of amplitude damping");
  add_common(twirl, flags);
  forward(twirl, flags, "--gamma", "gamma", "damping strength");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  return run(app.get_subcommands().front()->get_name(), flags);
}
