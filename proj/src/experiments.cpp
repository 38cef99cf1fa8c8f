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

#include "vcem/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vcem/error.hpp"
#include "vcem/simulator.hpp"

namespace vcem::exp {

namespace {

using nlohmann::json;

constexpr std::size_t kDefaultSweepLimit = 10;

std::string trim(std::string s) {
  auto blank = [](unsigned char ch) { return std::isspace(ch) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), blank));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), blank).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

double parse_double(const std::string &key, const std::string &v) {
  const std::string t = trim(v);
  char *end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  require(!t.empty() && end == t.c_str() + t.size() && std::isfinite(x), ErrorKind::Config,
          "'" + key + "' expects a number, got '" + v + "'");
  return x;
}

std::uint64_t parse_unsigned(const std::string &key, const std::string &v) {
  const std::string t = trim(v);
  require(!t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char ch) { return std::isdigit(ch) != 0; }),
          ErrorKind::Config, "'" + key + "' expects a non-negative integer, got '" + v + "'");
  try {
    return std::stoull(t);
  } catch (const std::exception &) {
    fail(ErrorKind::Config, "'" + key + "' is out of range");
  }
}

bool parse_bool(const std::string &key, const std::string &v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  fail(ErrorKind::Config, "'" + key + "' expects true or false, got '" + v + "'");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T> &items, F to_text) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ',';
    s += to_text(items[i]);
  }
  return s;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    v[i] = std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)));
  }
  return v;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << text;
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing " + path.string());
}

std::filesystem::path prepare_out(const ExperimentConfig &cfg) {
  std::filesystem::path dir(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorKind::Io, "cannot create output directory " + cfg.out + ": " + ec.message());
  return dir;
}

/// Parsing failures of user-supplied specs are configuration errors.
template <class F>
auto as_config(F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::Io) fail(ErrorKind::Config, e.what());
    throw;
  }
}

std::size_t worker_count(const ExperimentConfig &cfg, std::size_t jobs) {
  std::size_t t = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(t, jobs));
}

/// Runs body(i) for i in [0, count) on `workers` threads; the first failure is rethrown.
template <class F>
void parallel_for(std::size_t count, std::size_t workers, F body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (auto &t : pool) t.join();
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

json channel_json(const Channel &ch) {
  if (const auto *d = std::get_if<DepolarizingChannel>(&ch)) {
    return {{"kind", "depolarizing"}, {"qubits", d->n}, {"p", d->p}};
  }
  const auto &pc = std::get<PauliChannel>(ch);
  json terms = json::array();
  for (const auto &t : pc.terms()) terms.push_back({{"pauli", t.pauli.letters()}, {"p", t.probability}});
  return {{"kind", "pauli"}, {"support", pc.support()}, {"terms", terms}};
}

json layout_json(const NoiseLayout &layout) {
  json moments = json::array();
  for (const auto &m : layout.moments) {
    json chans = json::array();
    for (const auto &ch : m) chans.push_back(channel_json(ch));
    moments.push_back(chans);
  }
  return moments;
}

json fit_json(const FitResult &f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"x", f.x}, {"y", f.y}};
}

json manifest_base(const ExperimentConfig &cfg) {
  return {{"tool", "vcem"},
          {"version", kToolVersion},
          {"experiment", experiment_name(cfg.experiment)},
          {"seeds", {{"coherent", cfg.seed_coh}, {"incoherent", cfg.seed_inc}}},
          {"config", to_config_text(cfg)}};
}

void write_manifest(const std::filesystem::path &dir, const ExperimentConfig &cfg, const json &manifest) {
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  write_text(dir / "config.txt", to_config_text(cfg));
}

struct Setup {
  Graph graph;
  ParamCircuit circuit;
  StabilizerSet stabilizers;
  NoiseSpec noise;
  NoiseLayout layout;
};

Setup build_setup(const std::string &graph, const std::string &noise, double coh_mag, std::uint64_t seed_coh,
                  std::uint64_t seed_inc) {
  Setup s;
  s.graph = as_config([&] { return parse_graph_spec(graph); });
  s.noise = as_config([&] { return parse_noise_spec(noise); });
  require(std::isfinite(coh_mag) && coh_mag >= 0, ErrorKind::Config, "coherent-error magnitude must be non-negative");
  s.circuit = transpile(build_graph_circuit(s.graph));
  s.circuit.set_epsilons(sample_coherent_errors(s.circuit, coh_mag, seed_coh));
  s.circuit.coherent_seed = seed_coh;
  s.stabilizers = graph_stabilizers(s.graph);
  s.layout = build_noise_layout(s.noise, s.circuit, seed_inc);
  return s;
}

}  // namespace

const char *experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Optimize: return "optimize";
    case Experiment::DeltaScaling: return "delta-scaling";
    case Experiment::GhzLandscape: return "ghz-landscape";
    case Experiment::TwirlDemo: return "twirl-demo";
  }
  return "?";
}

Experiment parse_experiment(const std::string &name) {
  for (Experiment e :
       {Experiment::Optimize, Experiment::DeltaScaling, Experiment::GhzLandscape, Experiment::TwirlDemo}) {
    if (name == experiment_name(e)) return e;
  }
  fail(ErrorKind::Config, "unknown experiment '" + name + "'");
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  cfg.eps_sweep = log_spaced(1e-3, 1e-1, 8);
  cfg.n_sweep = {4, 5, 6, 7, 8, 9, 10};
  cfg.variants = {ghz::Variant::Noiseless, ghz::Variant::EndPauli, ghz::Variant::PerMomentDepol,
                  ghz::Variant::PerMomentPauli};
  if (e == Experiment::DeltaScaling) {
    cfg.graph = "line:10";
    cfg.noise = "pauli:m=1+2,mag=0.01";
  }
  return cfg;
}

void apply_setting(ExperimentConfig &cfg, const std::string &raw_key, const std::string &value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string v = trim(value);
  if (key == "experiment") {
    cfg.experiment = parse_experiment(v);
  } else if (key == "graph") {
    cfg.graph = v;
  } else if (key == "noise") {
    cfg.noise = v;
  } else if (key == "coh_mag") {
    cfg.coh_mag = parse_double(key, v);
  } else if (key == "seed_coh") {
    cfg.seed_coh = parse_unsigned(key, v);
  } else if (key == "seed_inc") {
    cfg.seed_inc = parse_unsigned(key, v);
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "max_iters") {
    cfg.optimizer.max_iters = parse_unsigned(key, v);
  } else if (key == "lr") {
    cfg.optimizer.learning_rate = parse_double(key, v);
  } else if (key == "grad_tol") {
    cfg.optimizer.grad_tolerance = parse_double(key, v);
  } else if (key == "adaptive") {
    cfg.optimizer.adaptive = parse_bool(key, v);
  } else if (key == "beta1") {
    cfg.optimizer.beta1 = parse_double(key, v);
  } else if (key == "beta2") {
    cfg.optimizer.beta2 = parse_double(key, v);
  } else if (key == "adam_eps") {
    cfg.optimizer.adam_epsilon = parse_double(key, v);
  } else if (key == "gradient") {
    if (v == "adjoint") {
      cfg.gradient = GradientMethod::Adjoint;
    } else if (v == "shift") {
      cfg.gradient = GradientMethod::ParameterShift;
    } else {
      fail(ErrorKind::Config, "'gradient' expects adjoint or shift, got '" + v + "'");
    }
  } else if (key == "eps_sweep") {
    cfg.eps_sweep.clear();
    for (const auto &s : split(v, ',')) cfg.eps_sweep.push_back(parse_double(key, s));
  } else if (key == "n_sweep") {
    cfg.n_sweep.clear();
    for (const auto &s : split(v, ',')) {
      const auto dash = s.find('-');
      if (dash == std::string::npos) {
        cfg.n_sweep.push_back(parse_unsigned(key, s));
      } else {
        const auto lo = parse_unsigned(key, s.substr(0, dash));
        const auto hi = parse_unsigned(key, s.substr(dash + 1));
        require(lo <= hi, ErrorKind::Config, "'n_sweep' range is empty");
        for (auto n = lo; n <= hi; ++n) cfg.n_sweep.push_back(n);
      }
    }
  } else if (key == "n_sweep_eps") {
    cfg.n_sweep_eps = parse_double(key, v);
  } else if (key == "allow_large") {
    cfg.allow_large = parse_bool(key, v);
  } else if (key == "variants") {
    cfg.variants.clear();
    for (const auto &s : split(v, ',')) cfg.variants.push_back(ghz::parse_variant(s));
  } else if (key == "ghz_epsilon") {
    cfg.ghz_epsilon = parse_double(key, v);
  } else if (key == "ghz_points") {
    cfg.ghz_points = parse_unsigned(key, v);
  } else if (key == "gamma") {
    cfg.gamma = parse_double(key, v);
  } else if (key == "threads") {
    cfg.threads = parse_unsigned(key, v);
  } else {
    fail(ErrorKind::Config, "unknown configuration key '" + raw_key + "'");
  }
}

void apply_config_file(ExperimentConfig &cfg, const std::filesystem::path &path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Config, "cannot read config file " + path.string());
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::Config,
            path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

std::string to_config_text(const ExperimentConfig &cfg) {
  std::ostringstream o;
  const auto &opt = cfg.optimizer;
  o << "experiment = " << experiment_name(cfg.experiment) << "\n"
    << "graph = " << cfg.graph << "\n"
    << "noise = " << cfg.noise << "\n"
    << "coh_mag = " << fmt(cfg.coh_mag) << "\n"
    << "seed_coh = " << cfg.seed_coh << "\n"
    << "seed_inc = " << cfg.seed_inc << "\n"
    << "max_iters = " << opt.max_iters << "\n"
    << "lr = " << fmt(opt.learning_rate) << "\n"
    << "grad_tol = " << fmt(opt.grad_tolerance) << "\n"
    << "adaptive = " << (opt.adaptive ? "true" : "false") << "\n"
    << "beta1 = " << fmt(opt.beta1) << "\n"
    << "beta2 = " << fmt(opt.beta2) << "\n"
    << "adam_eps = " << fmt(opt.adam_epsilon) << "\n"
    << "gradient = " << (cfg.gradient == GradientMethod::Adjoint ? "adjoint" : "shift") << "\n"
    << "eps_sweep = " << join(cfg.eps_sweep, fmt) << "\n"
    << "n_sweep = " << join(cfg.n_sweep, [](std::size_t n) { return std::to_string(n); }) << "\n"
    << "n_sweep_eps = " << fmt(cfg.n_sweep_eps) << "\n"
    << "allow_large = " << (cfg.allow_large ? "true" : "false") << "\n"
    << "variants = " << join(cfg.variants, [](ghz::Variant v) { return std::string(ghz::variant_name(v)); })
    << "\n"
    << "ghz_epsilon = " << fmt(cfg.ghz_epsilon) << "\n"
    << "ghz_points = " << cfg.ghz_points << "\n"
    << "gamma = " << fmt(cfg.gamma) << "\n"
    << "threads = " << cfg.threads << "\n";
  if (!cfg.out.empty()) o << "out = " << cfg.out << "\n";
  return o.str();
}

FitResult fit_line(std::vector<double> x, std::vector<double> y) {
  require(x.size() == y.size(), ErrorKind::SizeMismatch, "fit needs matching x and y");
  require(x.size() >= 4, ErrorKind::Config, "a fit needs at least 4 points, got " + std::to_string(x.size()));
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0, ErrorKind::Numeric, "fit abscissae are all equal");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  f.x = std::move(x);
  f.y = std::move(y);
  return f;
}

OptimizeResult run_optimize(const ExperimentConfig &cfg, const IterationCallback &progress) {
  cfg.optimizer.validate();
  Setup s = build_setup(cfg.graph, cfg.noise, cfg.coh_mag, cfg.seed_coh, cfg.seed_inc);

  std::unique_ptr<CostEvaluator> f;
  if (s.layout.empty()) {
    f = std::make_unique<PureCost>(s.circuit, s.stabilizers);
  } else {
    require(s.circuit.num_qubits() <= kMaxNoisyQubits, ErrorKind::ResourceLimit,
            "noisy simulation supports at most " + std::to_string(kMaxNoisyQubits) + " qubits");
    f = std::make_unique<NoisyCost>(s.circuit, s.layout, s.stabilizers);
  }
  f->method = cfg.gradient;

  const auto t0 = std::chrono::steady_clock::now();
  OptimizeResult r;
  r.trace = minimize(*f, cfg.optimizer, progress);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.epsilons = s.circuit.epsilons();
  r.keys = s.circuit.param_keys();
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    r.max_abs_residual = std::max(r.max_abs_residual, std::abs(r.trace.final_theta[k] + r.epsilons[k]));
  }

  if (!cfg.out.empty()) {
    const auto dir = prepare_out(cfg);
    std::string csv = "iter,cost,grad_norm,eps_rz,eps_rx,eps_rzx\n";
    for (const auto &rec : r.trace.iterations) {
      csv += std::to_string(rec.iter) + "," + fmt(rec.cost) + "," + fmt(rec.grad_norm) + "," + fmt(rec.metrics.rz) +
             "," + fmt(rec.metrics.rx) + "," + fmt(rec.metrics.rzx) + "\n";
    }
    write_text(dir / "trace.csv", csv);

    json params = json::array();
    for (std::size_t k = 0; k < r.keys.size(); ++k) {
      params.push_back({{"key", r.keys[k]}, {"epsilon", r.epsilons[k]}, {"theta", r.trace.final_theta[k]}});
    }
    json m = manifest_base(cfg);
    m["graph"] = cfg.graph;
    m["qubits"] = s.circuit.num_qubits();
    m["moments"] = s.circuit.num_moments();
    m["noise"] = s.noise.to_string();
    m["channels"] = layout_json(s.layout);
    m["parameters"] = params;
    m["result"] = {{"iterations", r.trace.iterations.size()},
                   {"converged", r.trace.converged},
                   {"final_cost", r.trace.final_cost},
                   {"final_grad_norm", r.trace.final_grad_norm},
                   {"max_abs_theta_plus_epsilon", r.max_abs_residual}};
    write_manifest(dir, cfg, m);
  }
  return r;
}

double delta_at_zero(const std::string &graph, const std::string &noise, double eps, std::uint64_t seed_coh,
                     std::uint64_t seed_inc) {
  Setup s = build_setup(graph, noise, eps, seed_coh, seed_inc);
  const std::vector<double> zero(s.circuit.num_params(), 0.0);
  return delta_cost(s.circuit, zero, s.layout, s.stabilizers);
}

DeltaScalingResult run_delta_scaling(const ExperimentConfig &cfg) {
  require(cfg.graph.rfind("line:", 0) == 0, ErrorKind::Config, "delta-scaling expects a line:N graph");
  const auto noise = as_config([&] { return parse_noise_spec(cfg.noise); });
  require(noise.kind == NoiseSpec::Kind::Pauli && !noise.end_only, ErrorKind::Config,
          "delta-scaling needs per-moment Pauli noise");
  const std::size_t limit = cfg.allow_large ? kMaxNoisyQubits : kDefaultSweepLimit;
  for (std::size_t n : cfg.n_sweep) {
    require(n >= 2, ErrorKind::Config, "n_sweep entries must be at least 2");
    require(n <= limit, ErrorKind::ResourceLimit,
            "n = " + std::to_string(n) + " exceeds the sweep ceiling of " + std::to_string(limit) +
                (cfg.allow_large ? "" : " (set allow_large to go up to 12)"));
  }
  for (double e : cfg.eps_sweep) require(std::isfinite(e) && e >= 0, ErrorKind::Config, "eps_sweep must be >= 0");

  DeltaScalingResult r;
  r.eps_points.resize(cfg.eps_sweep.size());
  r.n_points.resize(cfg.n_sweep.size());
  const std::size_t jobs = cfg.eps_sweep.size() + cfg.n_sweep.size();
  parallel_for(jobs, worker_count(cfg, jobs), [&](std::size_t i) {
    if (i < cfg.eps_sweep.size()) {
      const double e = cfg.eps_sweep[i];
      r.eps_points[i] = {e, delta_at_zero(cfg.graph, cfg.noise, e, cfg.seed_coh, cfg.seed_inc)};
    } else {
      const std::size_t j = i - cfg.eps_sweep.size();
      const std::size_t n = cfg.n_sweep[j];
      r.n_points[j] = {static_cast<double>(n), delta_at_zero("line:" + std::to_string(n), cfg.noise, cfg.n_sweep_eps,
                                                             cfg.seed_coh, cfg.seed_inc)};
    }
  });

  std::vector<double> lx, ly, nx, ny;
  for (const auto &p : r.eps_points) {
    if (p.x > 0 && p.delta != 0) {
      lx.push_back(std::log10(p.x));
      ly.push_back(std::log10(std::abs(p.delta)));
    }
  }
  for (const auto &p : r.n_points) {
    nx.push_back(p.x);
    ny.push_back(std::abs(p.delta));
  }
  r.eps_fit = fit_line(lx, ly);
  r.n_fit = fit_line(nx, ny);

  if (!cfg.out.empty()) {
    const auto dir = prepare_out(cfg);
    std::string a = "epsilon,delta,abs_delta\n";
    for (const auto &p : r.eps_points) a += fmt(p.x) + "," + fmt(p.delta) + "," + fmt(std::abs(p.delta)) + "\n";
    write_text(dir / "delta_vs_eps.csv", a);
    std::string b = "n,delta,abs_delta\n";
    for (const auto &p : r.n_points) b += std::to_string(static_cast<std::size_t>(p.x)) + "," + fmt(p.delta) + "," + fmt(std::abs(p.delta)) + "\n";
    write_text(dir / "delta_vs_n.csv", b);
    const json fits = {{"log_log_eps", fit_json(r.eps_fit)}, {"linear_n", fit_json(r.n_fit)}};
    write_text(dir / "fit.json", fits.dump(2) + "\n");
    json m = manifest_base(cfg);
    m["graph"] = cfg.graph;
    m["noise"] = noise.to_string();
    m["fit"] = fits;
    write_manifest(dir, cfg, m);
  }
  return r;
}

std::vector<GhzVariantResult> run_ghz_landscape(const ExperimentConfig &cfg) {
  require(cfg.ghz_points >= 2, ErrorKind::Config, "ghz_points must be at least 2");
  require(!cfg.variants.empty(), ErrorKind::Config, "no GHZ variant selected");
  std::vector<GhzVariantResult> out;
  for (ghz::Variant v : cfg.variants) {
    GhzVariantResult res;
    res.variant = v;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cfg.ghz_points; ++k) {
      ghz::Scenario s;
      s.variant = v;
      s.epsilon = cfg.ghz_epsilon;
      s.theta = -std::numbers::pi + 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cfg.ghz_points - 1);
      GhzRow row{s.theta, ghz::analytic_cost(s), ghz::simulated_cost(s), 0};
      if (v == ghz::Variant::PerMomentPauli) row.delta = ghz::simulated_delta(s);
      res.max_abs_difference = std::max(res.max_abs_difference, std::abs(row.analytic - row.simulated));
      res.max_abs_delta = std::max(res.max_abs_delta, std::abs(row.delta));
      if (row.simulated < best) {
        best = row.simulated;
        res.argmin_theta = row.theta;
      }
      res.rows.push_back(row);
    }
    out.push_back(std::move(res));
  }

  if (!cfg.out.empty()) {
    const auto dir = prepare_out(cfg);
    json summary = json::array();
    for (const auto &res : out) {
      const bool with_delta = res.variant == ghz::Variant::PerMomentPauli;
      std::string csv = with_delta ? "theta,analytic,simulated,abs_difference,delta\n"
                                   : "theta,analytic,simulated,abs_difference\n";
      for (const auto &row : res.rows) {
        csv += fmt(row.theta) + "," + fmt(row.analytic) + "," + fmt(row.simulated) + "," +
               fmt(std::abs(row.analytic - row.simulated));
        csv += with_delta ? "," + fmt(row.delta) + "\n" : "\n";
      }
      write_text(dir / (std::string("ghz_") + ghz::variant_name(res.variant) + ".csv"), csv);
      summary.push_back({{"variant", ghz::variant_name(res.variant)},
                         {"max_abs_difference", res.max_abs_difference},
                         {"max_abs_delta", res.max_abs_delta},
                         {"argmin_theta", res.argmin_theta}});
    }
    json m = manifest_base(cfg);
    m["epsilon"] = cfg.ghz_epsilon;
    m["summary"] = summary;
    write_manifest(dir, cfg, m);
  }
  return out;
}

TwirlResult run_twirl_demo(const ExperimentConfig &cfg) {
  require(std::isfinite(cfg.gamma) && cfg.gamma >= 0 && cfg.gamma <= 1, ErrorKind::Config, "gamma must lie in [0, 1]");
  const GenericChannel ad = GenericChannel::amplitude_damping(cfg.gamma);
  const Eigen::MatrixXcd s = superoperator(ad);

  std::vector<Eigen::MatrixXcd> paulis;
  for (const auto &p : all_pauli_strings(1)) paulis.push_back(to_dense(p));

  TwirlResult r;
  r.gamma = cfg.gamma;
  r.pauli_twirled = pauli_twirl(ad);
  r.residual_before = off_diagonal_residual(process_matrix(s, 1));
  r.residual_after = off_diagonal_residual(process_matrix(twirl_superoperator(s, paulis), 1));

  std::vector<Eigen::MatrixXcd> cliffords;
  for (const auto &c : single_qubit_cliffords()) cliffords.emplace_back(c);
  const Eigen::MatrixXcd averaged = twirl_superoperator(s, cliffords);
  r.clifford_p = clifford_twirl(ad).p;
  const double root = 1 + std::sqrt(1 - cfg.gamma);
  r.clifford_p_closed_form = (4 - root * root) / 3;
  const Eigen::MatrixXcd depol =
      superoperator(GenericChannel::from_pauli(depolarizing_as_pauli(DepolarizingChannel{1, r.clifford_p})));
  r.depolarizing_residual = (averaged - depol).cwiseAbs().maxCoeff();

  if (!cfg.out.empty()) {
    const auto dir = prepare_out(cfg);
    json terms = json::array();
    for (const auto &t : r.pauli_twirled.terms()) terms.push_back({{"pauli", t.pauli.letters()}, {"p", t.probability}});
    const json report = {{"channel", "amplitude_damping"},
                         {"gamma", r.gamma},
                         {"pauli_twirl", {{"terms", terms},
                                          {"off_diagonal_residual_before", r.residual_before},
                                          {"off_diagonal_residual_after", r.residual_after}}},
                         {"clifford_twirl", {{"p_group_average", r.clifford_p},
                                             {"p_closed_form", r.clifford_p_closed_form},
                                             {"depolarizing_residual", r.depolarizing_residual}}}};
    write_text(dir / "twirl.json", report.dump(2) + "\n");
    json m = manifest_base(cfg);
    m["report"] = report;
    write_manifest(dir, cfg, m);
  }
  return r;
}

}  // namespace vcem::exp
