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

#include "vcem/pauli.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "vcem/error.hpp"

namespace vcem {

namespace {

std::size_t num_words(std::size_t n) { return (n + 63) / 64; }

}  // namespace

PauliString::PauliString(std::size_t n) : n_(n), xs_(num_words(n), 0), zs_(num_words(n), 0) {}

PauliString PauliString::from_label(std::string_view label) {
  std::uint8_t phase = 0;
  if (!label.empty() && (label.front() == '+' || label.front() == '-')) {
    phase = label.front() == '-' ? 2 : 0;
    label.remove_prefix(1);
  }
  if (!label.empty() && label.front() == 'i') {
    phase = (phase + 1) & 3u;
    label.remove_prefix(1);
  }
  PauliString p(label.size());
  for (std::size_t q = 0; q < label.size(); ++q) {
    p.set_letter(q, label[q]);
  }
  p.phase_ = phase;
  return p;
}

PauliString PauliString::single(std::size_t n, std::size_t q, char letter) {
  require(q < n, ErrorKind::InvalidArgument, "qubit index out of range");
  PauliString p(n);
  p.set_letter(q, letter);
  return p;
}

Complex PauliString::phase_factor() const noexcept {
  switch (phase_) {
    case 0:
      return {1, 0};
    case 1:
      return {0, 1};
    case 2:
      return {-1, 0};
    default:
      return {0, -1};
  }
}

char PauliString::letter(std::size_t q) const noexcept {
  bool xb = x(q);
  bool zb = z(q);
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

void PauliString::set_letter(std::size_t q, char letter) {
  require(q < n_, ErrorKind::InvalidArgument, "qubit index out of range");
  bool xb = false;
  bool zb = false;
  switch (letter) {
    case 'I':
    case '_':
      break;
    case 'X':
      xb = true;
      break;
    case 'Y':
      xb = zb = true;
      break;
    case 'Z':
      zb = true;
      break;
    default:
      fail(ErrorKind::InvalidArgument, std::string("invalid Pauli letter '") + letter + "'");
  }
  std::uint64_t bit = std::uint64_t{1} << (q & 63);
  xs_[q >> 6] = xb ? (xs_[q >> 6] | bit) : (xs_[q >> 6] & ~bit);
  zs_[q >> 6] = zb ? (zs_[q >> 6] | bit) : (zs_[q >> 6] & ~bit);
}

bool PauliString::is_identity_letters() const noexcept {
  for (std::size_t w = 0; w < xs_.size(); ++w) {
    if (xs_[w] | zs_[w]) return false;
  }
  return true;
}

std::size_t PauliString::weight() const noexcept {
  std::size_t total = 0;
  for (std::size_t w = 0; w < xs_.size(); ++w) {
    total += std::popcount(xs_[w] | zs_[w]);
  }
  return total;
}

std::size_t PauliString::y_count() const noexcept {
  std::size_t total = 0;
  for (std::size_t w = 0; w < xs_.size(); ++w) {
    total += std::popcount(xs_[w] & zs_[w]);
  }
  return total;
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (std::size_t q = 0; q < n_; ++q) {
    if (x(q) || z(q)) out.push_back(static_cast<int>(q));
  }
  return out;
}

bool PauliString::same_letters(const PauliString &other) const noexcept {
  return n_ == other.n_ && xs_ == other.xs_ && zs_ == other.zs_;
}

PauliString PauliString::restricted(std::span<const int> qubits) const {
  PauliString out(qubits.size());
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    require(qubits[k] >= 0 && static_cast<std::size_t>(qubits[k]) < n_, ErrorKind::InvalidArgument,
            "restriction qubit out of range");
    out.set_letter(k, letter(static_cast<std::size_t>(qubits[k])));
  }
  out.phase_ = phase_;
  return out;
}

PauliString PauliString::embedded(std::size_t n, std::span<const int> support) const {
  require(support.size() == n_, ErrorKind::SizeMismatch, "support size does not match string size");
  PauliString out(n);
  for (std::size_t k = 0; k < n_; ++k) {
    require(support[k] >= 0 && static_cast<std::size_t>(support[k]) < n, ErrorKind::InvalidArgument,
            "support qubit out of range");
    out.set_letter(static_cast<std::size_t>(support[k]), letter(k));
  }
  out.phase_ = phase_;
  return out;
}

std::uint64_t PauliString::basis_x_mask() const {
  require(n_ <= 62, ErrorKind::ResourceLimit, "basis masks need n <= 62");
  std::uint64_t mask = 0;
  for (std::size_t q = 0; q < n_; ++q) {
    if (x(q)) mask |= std::uint64_t{1} << (n_ - 1 - q);
  }
  return mask;
}

std::uint64_t PauliString::basis_z_mask() const {
  require(n_ <= 62, ErrorKind::ResourceLimit, "basis masks need n <= 62");
  std::uint64_t mask = 0;
  for (std::size_t q = 0; q < n_; ++q) {
    if (z(q)) mask |= std::uint64_t{1} << (n_ - 1 - q);
  }
  return mask;
}

std::string PauliString::letters() const {
  std::string out(n_, 'I');
  for (std::size_t q = 0; q < n_; ++q) out[q] = letter(q);
  return out;
}

std::string PauliString::label() const {
  static constexpr const char *kPrefix[4] = {"", "i", "-", "-i"};
  return kPrefix[phase_] + letters();
}

std::size_t PauliString::letters_hash() const noexcept {
  std::size_t h = n_ * 0x9E3779B97F4A7C15ull;
  for (std::size_t w = 0; w < xs_.size(); ++w) {
    h ^= xs_[w] + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h ^= zs_[w] * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
  }
  return h;
}

bool commutes(const PauliString &p, const PauliString &q) {
  require(p.size() == q.size(), ErrorKind::SizeMismatch, "commutes: Pauli strings differ in size");
  auto px = p.x_words();
  auto pz = p.z_words();
  auto qx = q.x_words();
  auto qz = q.z_words();
  std::uint64_t parity = 0;
  for (std::size_t w = 0; w < px.size(); ++w) {
    parity ^= static_cast<std::uint64_t>(std::popcount((px[w] & qz[w]) ^ (pz[w] & qx[w])));
  }
  return (parity & 1u) == 0;
}

PauliString multiply(const PauliString &p, const PauliString &q) {
  require(p.size() == q.size(), ErrorKind::SizeMismatch, "multiply: Pauli strings differ in size");
  PauliString out(p.size());
  // Per-qubit letter products contribute +i (XY, YZ, ZX) or -i (YX, ZY, XZ).
  int plus = 0;
  int minus = 0;
  for (std::size_t w = 0; w < p.xs_.size(); ++w) {
    std::uint64_t x1 = p.xs_[w], z1 = p.zs_[w], x2 = q.xs_[w], z2 = q.zs_[w];
    std::uint64_t y1 = x1 & z1;
    std::uint64_t xo = x1 & ~z1;
    std::uint64_t zo = z1 & ~x1;
    plus += std::popcount((y1 & z2 & ~x2) | (xo & z2 & x2) | (zo & x2 & ~z2));
    minus += std::popcount((y1 & x2 & ~z2) | (xo & z2 & ~x2) | (zo & x2 & z2));
    out.xs_[w] = x1 ^ x2;
    out.zs_[w] = z1 ^ z2;
  }
  out.phase_ = static_cast<std::uint8_t>((p.phase_ + q.phase_ + plus + 3 * minus) & 3);
  return out;
}

Eigen::MatrixXcd to_dense(const PauliString &p) {
  static const Eigen::Matrix2cd kI = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd kX, kY, kZ;
  kX << 0, 1, 1, 0;
  kY << 0, Complex(0, -1), Complex(0, 1), 0;
  kZ << 1, 0, 0, -1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1) * p.phase_factor();
  for (std::size_t q = 0; q < p.size(); ++q) {
    const Eigen::Matrix2cd *m = &kI;
    switch (p.letter(q)) {
      case 'X':
        m = &kX;
        break;
      case 'Y':
        m = &kY;
        break;
      case 'Z':
        m = &kZ;
        break;
      default:
        break;
    }
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.block<2, 2>(2 * r, 2 * c) = out(r, c) * (*m);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<PauliString> all_pauli_strings(std::size_t k) {
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::size_t count = std::size_t{1} << (2 * k);
  std::vector<PauliString> out;
  out.reserve(count);
  for (std::size_t index = 0; index < count; ++index) {
    PauliString p(k);
    for (std::size_t q = 0; q < k; ++q) {
      std::size_t digit = (index >> (2 * (k - 1 - q))) & 3u;
      p.set_letter(q, kLetters[digit]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

void Graph::validate() const {
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    require(u >= 0 && v >= 0 && static_cast<std::size_t>(u) < n && static_cast<std::size_t>(v) < n,
            ErrorKind::InvalidArgument, "graph edge references a node outside the graph");
    require(u != v, ErrorKind::InvalidArgument, "graph contains a self-loop");
    auto key = std::minmax(u, v);
    require(seen.insert(key).second, ErrorKind::InvalidArgument, "graph contains a duplicate edge");
  }
}

std::vector<int> Graph::neighbors(int node) const {
  std::vector<int> out;
  for (auto [u, v] : edges) {
    if (u == node) out.push_back(v);
    if (v == node) out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Graph Graph::line(std::size_t n) {
  require(n >= 1, ErrorKind::InvalidArgument, "line graph needs at least one node");
  Graph g;
  g.n = n;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.edges.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
  }
  return g;
}

Graph Graph::grid(std::size_t rows, std::size_t cols) {
  require(rows >= 1 && cols >= 1, ErrorKind::InvalidArgument, "grid dimensions must be positive");
  Graph g;
  g.n = rows * cols;
  auto node = [cols](std::size_t r, std::size_t c) { return static_cast<int>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c + 1 < cols; ++c) g.edges.emplace_back(node(r, c), node(r, c + 1));
  }
  for (std::size_t r = 0; r + 1 < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) g.edges.emplace_back(node(r, c), node(r + 1, c));
  }
  return g;
}

std::size_t symplectic_rank(std::span<const PauliString> strings) {
  if (strings.empty()) return 0;
  std::size_t n = strings.front().size();
  std::size_t words = num_words(n);
  // Row layout: [x words | z words].
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(strings.size());
  for (const auto &s : strings) {
    require(s.size() == n, ErrorKind::SizeMismatch, "symplectic_rank: strings differ in size");
    std::vector<std::uint64_t> row(2 * words);
    std::copy(s.x_words().begin(), s.x_words().end(), row.begin());
    std::copy(s.z_words().begin(), s.z_words().end(), row.begin() + static_cast<std::ptrdiff_t>(words));
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < 2 * n && rank < rows.size(); ++col) {
    std::size_t word = col < n ? col / 64 : words + (col - n) / 64;
    std::uint64_t bit = std::uint64_t{1} << ((col < n ? col : col - n) & 63);
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot][word] & bit)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r][word] & bit)) {
        for (std::size_t w = 0; w < rows[r].size(); ++w) rows[r][w] ^= rows[rank][w];
      }
    }
    ++rank;
  }
  return rank;
}

void StabilizerSet::validate() const {
  require(labels.empty() || labels.size() == generators.size(), ErrorKind::InvalidArgument,
          "stabilizer labels do not match generator count");
  if (generators.empty()) return;
  std::size_t n = generators.front().size();
  for (std::size_t i = 0; i < generators.size(); ++i) {
    require(generators[i].size() == n, ErrorKind::SizeMismatch, "stabilizer generators differ in size");
    require(generators[i].phase() == 0, ErrorKind::InvalidArgument,
            "stabilizer generator " + generators[i].label() + " does not have phase +1");
    for (std::size_t j = 0; j < i; ++j) {
      require(commutes(generators[i], generators[j]), ErrorKind::InvalidArgument,
              "stabilizer generators " + generators[j].label() + " and " + generators[i].label() +
                  " anticommute");
    }
  }
  require(symplectic_rank(generators) == generators.size(), ErrorKind::InvalidArgument,
          "stabilizer generators are not independent");
}

StabilizerSet graph_stabilizers(const Graph &g) {
  g.validate();
  StabilizerSet out;
  for (std::size_t i = 0; i < g.n; ++i) {
    PauliString s = PauliString::single(g.n, i, 'X');
    for (int j : g.neighbors(static_cast<int>(i))) s.set_letter(static_cast<std::size_t>(j), 'Z');
    out.labels.push_back("G" + std::to_string(i));
    out.generators.push_back(std::move(s));
  }
  return out;
}

StabilizerSet ghz_stabilizers(std::size_t n) {
  require(n >= 2, ErrorKind::InvalidArgument, "GHZ state needs at least two qubits");
  StabilizerSet out;
  PauliString all_x(n);
  for (std::size_t q = 0; q < n; ++q) all_x.set_letter(q, 'X');
  out.generators.push_back(all_x);
  out.labels.push_back("S0");
  for (std::size_t q = 0; q + 1 < n; ++q) {
    PauliString zz(n);
    zz.set_letter(q, 'Z');
    zz.set_letter(q + 1, 'Z');
    out.generators.push_back(std::move(zz));
    out.labels.push_back("S" + std::to_string(q + 1));
  }
  return out;
}

std::vector<PauliTerm> decompose(const Eigen::MatrixXcd &m) {
  require(m.rows() == m.cols(), ErrorKind::InvalidArgument, "decompose: matrix is not square");
  auto dim = static_cast<std::size_t>(m.rows());
  require(dim >= 1 && std::has_single_bit(dim), ErrorKind::InvalidArgument,
          "decompose: dimension is not a power of two");
  std::size_t k = static_cast<std::size_t>(std::countr_zero(dim));
  require(k <= 4, ErrorKind::InvalidArgument, "decompose: at most 4 qubits are supported");
  std::vector<PauliTerm> out;
  for (auto &p : all_pauli_strings(k)) {
    // Tr(P m) = sum_j P[j, j^x] m[j^x, j], with P|j> = c(j)|j^x>.
    std::uint64_t xm = k ? p.basis_x_mask() : 0;
    std::uint64_t zm = k ? p.basis_z_mask() : 0;
    Complex y_phase = std::pow(Complex(0, 1), static_cast<int>(p.y_count()));
    Complex trace = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      std::size_t src = j ^ xm;
      // P[j, src] = coefficient of P|src> = y_phase * (-1)^{popcount(src & zmask)}.
      double sign = (std::popcount(src & zm) & 1) ? -1.0 : 1.0;
      trace += y_phase * sign * m(static_cast<Eigen::Index>(src), static_cast<Eigen::Index>(j));
    }
    Complex c = trace / static_cast<double>(dim);
    if (std::abs(c) > 1e-14) out.push_back({c, std::move(p)});
  }
  return out;
}

Eigen::MatrixXcd resum(std::span<const PauliTerm> terms, std::size_t k) {
  auto dim = static_cast<Eigen::Index>(std::size_t{1} << k);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto &t : terms) {
    require(t.pauli.size() == k, ErrorKind::SizeMismatch, "resum: term size mismatch");
    out += t.coefficient * to_dense(t.pauli);
  }
  return out;
}

}  // namespace vcem
