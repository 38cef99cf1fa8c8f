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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "vcem/vcem.h"

namespace {

struct CircuitDeleter {
  void operator()(vcem_circuit *c) const { vcem_circuit_destroy(c); }
};
struct ConfigDeleter {
  void operator()(vcem_config *c) const { vcem_config_destroy(c); }
};
using CircuitPtr = std::unique_ptr<vcem_circuit, CircuitDeleter>;
using ConfigPtr = std::unique_ptr<vcem_config, ConfigDeleter>;

CircuitPtr make_circuit(const char *graph, double mag, uint64_t seed) {
  vcem_circuit *raw = nullptr;
  EXPECT_EQ(vcem_circuit_create(graph, mag, seed, &raw), VCEM_OK) << vcem_last_error();
  return CircuitPtr(raw);
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(vcem_version(), "0.1.0");
  EXPECT_STREQ(vcem_status_name(VCEM_OK), "ok");
  EXPECT_STRNE(vcem_status_name(VCEM_ERR_RESOURCE_LIMIT), vcem_status_name(VCEM_ERR_CONFIG));
}

TEST(CApi, CircuitLifecycle) {
  auto c = make_circuit("line:4", 0.05, 3);
  size_t n = 0, k = 0, m = 0;
  ASSERT_EQ(vcem_circuit_info(c.get(), &n, &k, &m), VCEM_OK);
  EXPECT_EQ(n, 4u);
  EXPECT_EQ(k, 11u);
  EXPECT_GT(m, 0u);

  std::vector<double> eps(k);
  ASSERT_EQ(vcem_circuit_epsilons(c.get(), eps.data(), eps.size()), VCEM_OK);
  std::vector<double> theta(k);
  for (size_t i = 0; i < k; ++i) theta[i] = -eps[i];
  double value = 0;
  ASSERT_EQ(vcem_cost(c.get(), theta.data(), theta.size(), &value), VCEM_OK);
  EXPECT_NEAR(value, -4, 1e-12);

  std::vector<double> g_shift(k), g_adj(k);
  for (size_t i = 0; i < k; ++i) theta[i] = 0.1 * static_cast<double>(i);
  ASSERT_EQ(vcem_gradient(c.get(), theta.data(), k, VCEM_GRADIENT_PARAMETER_SHIFT, g_shift.data()), VCEM_OK);
  ASSERT_EQ(vcem_gradient(c.get(), theta.data(), k, VCEM_GRADIENT_ADJOINT, g_adj.data()), VCEM_OK);
  for (size_t i = 0; i < k; ++i) EXPECT_NEAR(g_shift[i], g_adj[i], 1e-11);

  std::vector<double> zero(k, 0.0);
  ASSERT_EQ(vcem_circuit_set_epsilons(c.get(), zero.data(), k), VCEM_OK);
  ASSERT_EQ(vcem_cost(c.get(), zero.data(), k, &value), VCEM_OK);
  EXPECT_NEAR(value, -4, 1e-12);
}

TEST(CApi, NoiseAndDelta) {
  auto c = make_circuit("line:3", 0.05, 1);
  size_t n = 0, k = 0, m = 0;
  ASSERT_EQ(vcem_circuit_info(c.get(), &n, &k, &m), VCEM_OK);
  std::vector<double> zero(k, 0.0);
  double delta = 0;
  ASSERT_EQ(vcem_delta_cost(c.get(), zero.data(), k, &delta), VCEM_OK);
  EXPECT_NEAR(delta, 0, 1e-14);
  ASSERT_EQ(vcem_circuit_set_noise(c.get(), "pauli:m=1+2,mag=0.01", 2), VCEM_OK) << vcem_last_error();
  ASSERT_EQ(vcem_delta_cost(c.get(), zero.data(), k, &delta), VCEM_OK) << vcem_last_error();
  EXPECT_TRUE(std::isfinite(delta));
  double noisy = 0;
  ASSERT_EQ(vcem_cost(c.get(), zero.data(), k, &noisy), VCEM_OK);
  EXPECT_GT(noisy, -3);
  EXPECT_EQ(vcem_circuit_set_noise(c.get(), "pauli:m=9", 2), VCEM_ERR_CONFIG);
}

TEST(CApi, ErrorReporting) {
  vcem_circuit *raw = nullptr;
  EXPECT_EQ(vcem_circuit_create("ring:3", 0.01, 1, &raw), VCEM_ERR_CONFIG);
  EXPECT_EQ(raw, nullptr);
  EXPECT_GT(std::strlen(vcem_last_error()), 0u);
  EXPECT_EQ(vcem_circuit_create("line:3", 0.01, 1, nullptr), VCEM_ERR_INVALID_ARGUMENT);

  auto c = make_circuit("line:3", 0.0, 1);
  std::vector<double> theta(2, 0.0);
  double value = 0;
  EXPECT_EQ(vcem_cost(c.get(), theta.data(), theta.size(), &value), VCEM_ERR_SIZE_MISMATCH);
  EXPECT_EQ(vcem_cost(nullptr, theta.data(), theta.size(), &value), VCEM_ERR_INVALID_ARGUMENT);

  auto big = make_circuit("grid:4x4", 0.0, 1);
  ASSERT_EQ(vcem_circuit_set_noise(big.get(), "depol:p=0.1", 1), VCEM_OK);
  std::vector<double> big_theta(2 * 16 + 24, 0.0);
  EXPECT_EQ(vcem_cost(big.get(), big_theta.data(), big_theta.size(), &value), VCEM_ERR_RESOURCE_LIMIT);
  vcem_circuit_destroy(nullptr);
}

TEST(CApi, GhzClosedForms) {
  for (int v = 0; v < 4; ++v) {
    double a = 0, s = 0;
    ASSERT_EQ(vcem_ghz_analytic_cost(static_cast<vcem_ghz_variant>(v), 0.3, 0.2, &a), VCEM_OK);
    ASSERT_EQ(vcem_ghz_simulated_cost(static_cast<vcem_ghz_variant>(v), 0.3, 0.2, &s), VCEM_OK);
    EXPECT_NEAR(a, s, 1e-12);
  }
  double end = 0;
  ASSERT_EQ(vcem_ghz_analytic_cost(VCEM_GHZ_END_PAULI, -0.2, 0.2, &end), VCEM_OK);
  EXPECT_NEAR(end, -1.16, 1e-14);
  EXPECT_EQ(vcem_ghz_analytic_cost(static_cast<vcem_ghz_variant>(9), 0, 0, &end), VCEM_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ConfigAndRun) {
  vcem_config *raw = nullptr;
  ASSERT_EQ(vcem_config_create("optimize", &raw), VCEM_OK);
  ConfigPtr cfg(raw);
  EXPECT_EQ(vcem_config_set(cfg.get(), "graph", "line:3"), VCEM_OK);
  EXPECT_EQ(vcem_config_set(cfg.get(), "coh_mag", "0.02"), VCEM_OK);
  EXPECT_EQ(vcem_config_set(cfg.get(), "max_iters", "3000"), VCEM_OK);
  EXPECT_EQ(vcem_config_set(cfg.get(), "nonsense", "1"), VCEM_ERR_CONFIG);

  char *text = nullptr;
  ASSERT_EQ(vcem_config_text(cfg.get(), &text), VCEM_OK);
  EXPECT_NE(std::string(text).find("graph = line:3"), std::string::npos);
  vcem_string_free(text);

  size_t calls = 0;
  char *summary = nullptr;
  const auto progress = [](size_t, double, double, void *user) { ++*static_cast<size_t *>(user); };
  ASSERT_EQ(vcem_run(cfg.get(), progress, &calls, &summary), VCEM_OK) << vcem_last_error();
  const auto j = nlohmann::json::parse(summary);
  vcem_string_free(summary);
  EXPECT_EQ(j["experiment"], "optimize");
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_NEAR(j["final_cost"].get<double>(), -3, 1e-6);
  EXPECT_EQ(calls, j["iterations"].get<size_t>());

  vcem_config *bad = nullptr;
  EXPECT_EQ(vcem_config_create("nothing", &bad), VCEM_ERR_CONFIG);
}

TEST(CApi, ConfigFile) {
  const auto path = std::filesystem::temp_directory_path() / "vcem_capi_test.cfg";
  {
    std::ofstream f(path);
    f << "gamma = 0.3\n";
  }
  vcem_config *raw = nullptr;
  ASSERT_EQ(vcem_config_create("twirl-demo", &raw), VCEM_OK);
  ConfigPtr cfg(raw);
  ASSERT_EQ(vcem_config_load(cfg.get(), path.c_str()), VCEM_OK);
  char *summary = nullptr;
  ASSERT_EQ(vcem_run(cfg.get(), nullptr, nullptr, &summary), VCEM_OK);
  const auto j = nlohmann::json::parse(summary);
  vcem_string_free(summary);
  EXPECT_DOUBLE_EQ(j["gamma"].get<double>(), 0.3);
  EXPECT_NEAR(j["clifford_p"].get<double>(), j["clifford_p_closed_form"].get<double>(), 1e-12);
  std::filesystem::remove(path);
  EXPECT_EQ(vcem_config_load(cfg.get(), "/nonexistent/file.cfg"), VCEM_ERR_CONFIG);
}

}  // namespace
