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

#include "vcem/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "vcem/error.hpp"
#include "vcem/random.hpp"

namespace vcem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;

// Embeds a k-qubit operator acting on `qubits` into the kron-ordered n-qubit space.
Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd &op, std::span<const int> qubits, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t k = qubits.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  auto local_index = [&](std::size_t full) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < k; ++j) {
      idx = (idx << 1) | ((full >> (n - 1 - static_cast<std::size_t>(qubits[j]))) & 1u);
    }
    return idx;
  };
  std::size_t support_mask = 0;
  for (int q : qubits) support_mask |= std::size_t{1} << (n - 1 - static_cast<std::size_t>(q));
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t lc = local_index(col);
    for (std::size_t lr = 0; lr < (std::size_t{1} << k); ++lr) {
      std::size_t row = col & ~support_mask;
      for (std::size_t j = 0; j < k; ++j) {
        if ((lr >> (k - 1 - j)) & 1u) row |= std::size_t{1} << (n - 1 - static_cast<std::size_t>(qubits[j]));
      }
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          op(static_cast<Eigen::Index>(lr), static_cast<Eigen::Index>(lc));
    }
  }
  return out;
}

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

bool is_quarter_multiple(double angle) {
  double turns = angle / kHalfPi;
  return std::abs(turns - std::round(turns)) < 1e-9;
}

// A native gate template before parameter keys are assigned.
struct Pending {
  GateKind kind;
  std::vector<int> qubits;
  double angle;
};

using SubMoments = std::vector<std::vector<Pending>>;

SubMoments lower_hadamard(int q) {
  return {{{GateKind::Rz, {q}, kHalfPi}}, {{GateKind::Rx, {q}, kHalfPi}}, {{GateKind::Rz, {q}, -3 * kHalfPi}}};
}

// CNOT(c, t) = exp(i pi/4) Rz_c(pi/2) Rx_t(pi/2) Rzx_ct(-pi/2); all three commute.
SubMoments lower_cnot(int c, int t) {
  return {{{GateKind::Rzx, {c, t}, -kHalfPi}}, {{GateKind::Rz, {c}, kHalfPi}, {GateKind::Rx, {t}, kHalfPi}}};
}

// CZ(a, b) = H_b CNOT(a, b) H_b.
SubMoments lower_cz(int a, int b) {
  SubMoments out = lower_hadamard(b);
  for (auto &m : lower_cnot(a, b)) out.push_back(std::move(m));
  for (auto &m : lower_hadamard(b)) out.push_back(std::move(m));
  return out;
}

}  // namespace

std::size_t AbstractCircuit::num_gates() const {
  std::size_t total = 0;
  for (const auto &layer : layers) total += layer.size();
  return total;
}

AbstractCircuit build_graph_circuit(const Graph &g) {
  g.validate();
  AbstractCircuit c;
  c.n = g.n;
  if (g.n == 0) return c;
  std::vector<AbstractGate> h_layer;
  for (std::size_t q = 0; q < g.n; ++q) h_layer.push_back({AbstractGateKind::H, {static_cast<int>(q)}});
  c.layers.push_back(std::move(h_layer));

  // First-fit packing of the CZ gates by qubit support.
  std::vector<std::vector<AbstractGate>> cz_layers;
  std::vector<std::vector<bool>> busy;
  for (auto [u, v] : g.edges) {
    auto [a, b] = std::minmax(u, v);
    std::size_t slot = 0;
    while (slot < cz_layers.size() && (busy[slot][a] || busy[slot][b])) ++slot;
    if (slot == cz_layers.size()) {
      cz_layers.emplace_back();
      busy.emplace_back(g.n, false);
    }
    cz_layers[slot].push_back({AbstractGateKind::CZ, {a, b}});
    busy[slot][a] = busy[slot][b] = true;
  }
  for (auto &layer : cz_layers) c.layers.push_back(std::move(layer));
  return c;
}

AbstractCircuit build_ghz_circuit(std::size_t n) {
  require(n >= 2, ErrorKind::InvalidArgument, "GHZ circuit needs at least two qubits");
  AbstractCircuit c;
  c.n = n;
  c.layers.push_back({{AbstractGateKind::H, {0}}});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    c.layers.push_back({{AbstractGateKind::CNOT, {static_cast<int>(i), static_cast<int>(i + 1)}}});
  }
  return c;
}

const char *gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::Rz:
      return "Rz";
    case GateKind::Rx:
      return "Rx";
    case GateKind::Rzx:
      return "Rzx";
  }
  return "?";
}

PauliString NativeGate::local_generator() const {
  switch (kind) {
    case GateKind::Rz:
      return PauliString::from_label("Z");
    case GateKind::Rx:
      return PauliString::from_label("X");
    case GateKind::Rzx:
      return PauliString::from_label("ZX");
  }
  return PauliString(qubits.size());
}

PauliString NativeGate::generator(std::size_t n) const { return local_generator().embedded(n, qubits); }

int NativeGate::quarter_turns() const {
  auto turns = static_cast<long long>(std::llround(clifford_angle / kHalfPi));
  return static_cast<int>(((turns % 4) + 4) % 4);
}

const NativeGate &ParamCircuit::gate(std::size_t flat_index) const {
  require(flat_index < gate_refs_.size(), ErrorKind::InvalidArgument, "gate index out of range");
  const auto &ref = gate_refs_[flat_index];
  return moments_[ref.moment].gates[ref.index];
}

std::size_t ParamCircuit::intern_key(const std::string &key, GateKind family) {
  if (auto found = find_key(key)) {
    require(param_families_[*found] == family, ErrorKind::InvalidArgument,
            "parameter key " + key + " reused across gate kinds");
    return *found;
  }
  param_keys_.push_back(key);
  param_families_.push_back(family);
  epsilons_.push_back(0.0);
  return param_keys_.size() - 1;
}

std::optional<std::size_t> ParamCircuit::find_key(const std::string &key) const {
  auto it = std::find(param_keys_.begin(), param_keys_.end(), key);
  if (it == param_keys_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - param_keys_.begin());
}

void ParamCircuit::add_moment(Moment moment) {
  std::vector<bool> used(n_, false);
  for (const auto &g : moment.gates) {
    std::size_t arity = g.kind == GateKind::Rzx ? 2 : 1;
    require(g.qubits.size() == arity, ErrorKind::InvalidArgument,
            std::string(gate_kind_name(g.kind)) + " gate has the wrong number of qubits");
    require(g.param < param_keys_.size(), ErrorKind::InvalidArgument, "gate references an unknown parameter key");
    require(is_quarter_multiple(g.clifford_angle), ErrorKind::InvalidArgument,
            "clifford_angle is not a multiple of pi/2");
    for (int q : g.qubits) {
      require(q >= 0 && static_cast<std::size_t>(q) < n_, ErrorKind::InvalidArgument, "gate qubit out of range");
      require(!used[static_cast<std::size_t>(q)], ErrorKind::InvalidArgument, "gates in a moment overlap");
      used[static_cast<std::size_t>(q)] = true;
    }
  }
  std::size_t index = moments_.size();
  for (std::size_t j = 0; j < moment.gates.size(); ++j) gate_refs_.push_back({index, j});
  moments_.push_back(std::move(moment));
}

void ParamCircuit::set_epsilons(std::vector<double> epsilons) {
  require(epsilons.size() == param_keys_.size(), ErrorKind::SizeMismatch,
          "epsilon vector does not match the number of parameter keys");
  for (double e : epsilons) require(std::isfinite(e), ErrorKind::Numeric, "non-finite coherent error");
  epsilons_ = std::move(epsilons);
}

std::map<std::string, double> ParamCircuit::epsilon_map() const {
  std::map<std::string, double> out;
  for (std::size_t k = 0; k < param_keys_.size(); ++k) out[param_keys_[k]] = epsilons_[k];
  return out;
}

void ParamCircuit::validate() const {
  require(epsilons_.size() == param_keys_.size(), ErrorKind::SizeMismatch, "epsilons misaligned with keys");
  for (const auto &m : moments_) {
    std::vector<bool> used(n_, false);
    for (const auto &g : m.gates) {
      require(g.param < param_keys_.size(), ErrorKind::InvalidArgument, "unknown parameter key");
      require(param_families_[g.param] == g.kind, ErrorKind::InvalidArgument, "key family mismatch");
      require(param_key_for(g.kind, g.qubits) == param_keys_[g.param], ErrorKind::InvalidArgument,
              "gate does not follow the parameter sharing rule");
      require(is_quarter_multiple(g.clifford_angle), ErrorKind::InvalidArgument, "non-Clifford offset");
      for (int q : g.qubits) {
        require(!used[static_cast<std::size_t>(q)], ErrorKind::InvalidArgument, "gates in a moment overlap");
        used[static_cast<std::size_t>(q)] = true;
      }
    }
  }
}

std::string param_key_for(GateKind kind, std::span<const int> qubits) {
  std::string key = gate_kind_name(kind);
  key += ':';
  for (std::size_t j = 0; j < qubits.size(); ++j) {
    if (j) key += '-';
    key += std::to_string(qubits[j]);
  }
  return key;
}

ParamCircuit transpile(const AbstractCircuit &c) {
  ParamCircuit out(c.n);
  for (const auto &layer : c.layers) {
    std::vector<SubMoments> lowered;
    std::size_t depth = 0;
    for (const auto &g : layer) {
      switch (g.kind) {
        case AbstractGateKind::H:
          require(g.qubits.size() == 1, ErrorKind::InvalidArgument, "H takes one qubit");
          lowered.push_back(lower_hadamard(g.qubits[0]));
          break;
        case AbstractGateKind::CZ:
          require(g.qubits.size() == 2, ErrorKind::InvalidArgument, "CZ takes two qubits");
          lowered.push_back(lower_cz(std::min(g.qubits[0], g.qubits[1]), std::max(g.qubits[0], g.qubits[1])));
          break;
        case AbstractGateKind::CNOT:
          require(g.qubits.size() == 2, ErrorKind::InvalidArgument, "CNOT takes two qubits");
          lowered.push_back(lower_cnot(g.qubits[0], g.qubits[1]));
          break;
        default:
          fail(ErrorKind::InvalidArgument, "unsupported source gate");
      }
      depth = std::max(depth, lowered.back().size());
    }
    // Zip the per-gate sequences; supports within a layer are disjoint.
    for (std::size_t step = 0; step < depth; ++step) {
      Moment m;
      for (const auto &seq : lowered) {
        if (step >= seq.size()) continue;
        for (const auto &p : seq[step]) {
          std::size_t param = out.intern_key(param_key_for(p.kind, p.qubits), p.kind);
          m.gates.push_back({p.kind, p.qubits, p.angle, param});
        }
      }
      if (!m.gates.empty()) out.add_moment(std::move(m));
    }
  }
  return out;
}

Eigen::MatrixXcd gate_unitary(const NativeGate &g, double theta, double epsilon) {
  double angle = g.clifford_angle + theta + epsilon;
  require(std::isfinite(angle), ErrorKind::Numeric, "non-finite gate angle");
  Eigen::MatrixXcd p = to_dense(g.local_generator());
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(p.rows(), p.cols());
  return std::cos(angle / 2) * id - Complex(0, 1) * std::sin(angle / 2) * p;
}

Eigen::MatrixXcd dense_unitary(const AbstractCircuit &c) {
  require(c.n <= 10, ErrorKind::ResourceLimit, "dense unitaries are limited to 10 qubits");
  auto dim = static_cast<Eigen::Index>(std::size_t{1} << c.n);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
  cz(3, 3) = -1;
  Eigen::Matrix4cd cnot = Eigen::Matrix4cd::Zero();
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
  for (const auto &layer : c.layers) {
    for (const auto &g : layer) {
      Eigen::MatrixXcd local;
      switch (g.kind) {
        case AbstractGateKind::H:
          local = hadamard();
          break;
        case AbstractGateKind::CZ:
          local = cz;
          break;
        case AbstractGateKind::CNOT:
          local = cnot;
          break;
      }
      u = embed_operator(local, g.qubits, c.n) * u;
    }
  }
  return u;
}

Eigen::MatrixXcd dense_unitary(const ParamCircuit &c, std::span<const double> theta) {
  require(c.num_qubits() <= 10, ErrorKind::ResourceLimit, "dense unitaries are limited to 10 qubits");
  require(theta.size() == c.num_params(), ErrorKind::SizeMismatch, "theta does not match parameter count");
  auto dim = static_cast<Eigen::Index>(std::size_t{1} << c.num_qubits());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto &m : c.moments()) {
    for (const auto &g : m.gates) {
      u = embed_operator(gate_unitary(g, theta[g.param], c.epsilons()[g.param]), g.qubits, c.num_qubits()) * u;
    }
  }
  return u;
}

std::vector<double> sample_coherent_errors(const ParamCircuit &c, double magnitude, std::uint64_t seed) {
  require(std::isfinite(magnitude) && magnitude >= 0, ErrorKind::InvalidArgument,
          "coherent error magnitude must be non-negative");
  std::vector<double> out;
  out.reserve(c.num_params());
  for (const auto &key : c.param_keys()) {
    auto engine = make_engine(seed, {stable_hash(key)});
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    out.push_back(magnitude * unit(engine));
  }
  return out;
}

namespace {

std::size_t parse_count(std::string_view text, const std::string &what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc() && ptr == text.data() + text.size(), ErrorKind::Config,
          "invalid " + what + ": '" + std::string(text) + "'");
  return value;
}

Graph read_edge_list(const std::string &path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Config, "cannot open graph file '" + path + "'");
  Graph g;
  std::optional<std::size_t> declared;
  std::string line;
  int max_node = -1;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "nodes") {
      std::string count;
      require(static_cast<bool>(fields >> count), ErrorKind::Config, "graph file: 'nodes' needs a count");
      declared = parse_count(count, "node count");
      continue;
    }
    std::string second;
    require(static_cast<bool>(fields >> second), ErrorKind::Config, "graph file: expected 'u v' on line: " + line);
    int u = static_cast<int>(parse_count(first, "node index"));
    int v = static_cast<int>(parse_count(second, "node index"));
    g.edges.emplace_back(u, v);
    max_node = std::max({max_node, u, v});
  }
  g.n = declared ? *declared : static_cast<std::size_t>(max_node + 1);
  try {
    g.validate();
  } catch (const Error &e) {
    fail(ErrorKind::Config, std::string("graph file: ") + e.what());
  }
  return g;
}

}  // namespace

Graph parse_graph_spec(const std::string &spec) {
  if (spec.rfind("line:", 0) == 0) {
    std::size_t n = parse_count(std::string_view(spec).substr(5), "line length");
    require(n >= 1, ErrorKind::Config, "line graph needs at least one node");
    return Graph::line(n);
  }
  if (spec.rfind("grid:", 0) == 0) {
    std::string_view dims = std::string_view(spec).substr(5);
    auto x = dims.find('x');
    require(x != std::string_view::npos, ErrorKind::Config, "grid spec must look like grid:RxC");
    std::size_t rows = parse_count(dims.substr(0, x), "grid rows");
    std::size_t cols = parse_count(dims.substr(x + 1), "grid columns");
    require(rows >= 1 && cols >= 1, ErrorKind::Config, "grid dimensions must be positive");
    return Graph::grid(rows, cols);
  }
  std::string path = spec.rfind("file:", 0) == 0 ? spec.substr(5) : spec;
  return read_edge_list(path);
}

}  // namespace vcem
