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

#include "vcem/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>

#include "vcem/error.hpp"

namespace vcem {

namespace {

constexpr Complex kI{0, 1};

Complex i_power(unsigned k) {
  switch (k & 3u) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

inline double parity_sign(std::uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

// a_j <- c a_j + mix * (-1)^{|(j^x) & z|} a_{j^x} over a register of `bits` bits.
void rotate_kernel(Complex *a, unsigned bits, std::uint64_t x, std::uint64_t z, double c, Complex mix) {
  const std::uint64_t dim = std::uint64_t{1} << bits;
  if (x == 0) {
    const Complex plus = c + mix;
    const Complex minus = c - mix;
    for (std::uint64_t j = 0; j < dim; ++j) a[j] *= (std::popcount(j & z) & 1) ? minus : plus;
    return;
  }
  const unsigned hb = 63u - static_cast<unsigned>(std::countl_zero(x));
  const std::uint64_t low = (std::uint64_t{1} << hb) - 1;
  for (std::uint64_t k = 0; k < dim / 2; ++k) {
    const std::uint64_t j = ((k & ~low) << 1) | (k & low);
    const std::uint64_t m = j ^ x;
    const Complex aj = a[j];
    const Complex am = a[m];
    a[j] = c * aj + mix * parity_sign(m & z) * am;
    a[m] = c * am + mix * parity_sign(j & z) * aj;
  }
}

// Dense k-qubit gate acting on the given bit positions (bit_pos[0] is the most
// significant index of the gate matrix).
void dense_kernel(Complex *a, unsigned bits, const Eigen::MatrixXcd &u, std::span<const unsigned> bit_pos) {
  const std::size_t k = bit_pos.size();
  const std::size_t sub = std::size_t{1} << k;
  std::uint64_t mask = 0;
  for (unsigned b : bit_pos) mask |= std::uint64_t{1} << b;
  std::vector<std::uint64_t> offsets(sub, 0);
  for (std::size_t s = 0; s < sub; ++s) {
    for (std::size_t t = 0; t < k; ++t) {
      if ((s >> (k - 1 - t)) & 1u) offsets[s] |= std::uint64_t{1} << bit_pos[t];
    }
  }
  std::vector<Complex> in(sub);
  const std::uint64_t dim = std::uint64_t{1} << bits;
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (std::size_t s = 0; s < sub; ++s) in[s] = a[base | offsets[s]];
    for (std::size_t r = 0; r < sub; ++r) {
      Complex acc = 0;
      for (std::size_t s = 0; s < sub; ++s) acc += u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) * in[s];
      a[base | offsets[r]] = acc;
    }
  }
}

std::vector<unsigned> positions(std::span<const int> qubits, std::size_t n, unsigned offset) {
  std::vector<unsigned> out;
  for (int q : qubits) {
    require(q >= 0 && static_cast<std::size_t>(q) < n, ErrorKind::InvalidArgument, "gate qubit out of range");
    out.push_back(static_cast<unsigned>(n - 1 - static_cast<std::size_t>(q)) + offset);
  }
  return out;
}

void check_unitary_shape(const Eigen::MatrixXcd &u, std::size_t k) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << k);
  require(u.rows() == dim && u.cols() == dim, ErrorKind::SizeMismatch, "gate matrix does not match its qubit count");
}

}  // namespace

// ---------------------------------------------------------------------------

StateVector::StateVector(std::size_t n) : n_(n) {
  require(n <= kMaxPureQubits, ErrorKind::ResourceLimit,
          "statevector register of " + std::to_string(n) + " qubits exceeds the " + std::to_string(kMaxPureQubits) +
              "-qubit ceiling");
  amps_.assign(std::size_t{1} << n, Complex(0, 0));
  amps_[0] = 1;
}

void StateVector::apply_rotation(const PauliString &generator, double angle) {
  require(generator.size() == n_, ErrorKind::SizeMismatch, "rotation generator size mismatch");
  require(generator.is_hermitian(), ErrorKind::InvalidArgument, "rotation generator must be Hermitian");
  const Complex f = i_power(generator.phase() + static_cast<unsigned>(generator.y_count()));
  rotate_kernel(amps_.data(), static_cast<unsigned>(n_), generator.basis_x_mask(), generator.basis_z_mask(),
                std::cos(angle / 2), -kI * std::sin(angle / 2) * f);
}

void StateVector::apply_unitary(const Eigen::MatrixXcd &u, std::span<const int> qubits) {
  check_unitary_shape(u, qubits.size());
  auto pos = positions(qubits, n_, 0);
  dense_kernel(amps_.data(), static_cast<unsigned>(n_), u, pos);
}

double StateVector::norm() const {
  double s = 0;
  for (const auto &a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

Eigen::VectorXcd StateVector::to_vector() const {
  return Eigen::Map<const Eigen::VectorXcd>(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(std::size_t n) : n_(n) {
  require(n <= kMaxNoisyQubits, ErrorKind::ResourceLimit,
          "density-matrix register of " + std::to_string(n) + " qubits exceeds the " +
              std::to_string(kMaxNoisyQubits) + "-qubit ceiling");
  data_.assign(std::size_t{1} << (2 * n), Complex(0, 0));
  data_[0] = 1;
}

DensityMatrix DensityMatrix::from_pure(const StateVector &psi) {
  DensityMatrix rho(psi.num_qubits());
  const std::size_t dim = rho.dimension();
  const auto &a = psi.amplitudes();
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) rho.data_[(r << rho.n_) | c] = a[r] * std::conj(a[c]);
  }
  return rho;
}

DensityMatrix DensityMatrix::from_pauli_sum(std::size_t n, std::span<const PauliString> paulis,
                                            std::span<const double> weights) {
  require(paulis.size() == weights.size(), ErrorKind::SizeMismatch, "one weight per Pauli string is required");
  DensityMatrix out(n);
  out.data_[0] = 0;
  const std::size_t dim = out.dimension();
  for (std::size_t k = 0; k < paulis.size(); ++k) {
    const auto &p = paulis[k];
    require(p.size() == n, ErrorKind::SizeMismatch, "Pauli string size mismatch");
    const std::uint64_t x = p.basis_x_mask();
    const std::uint64_t z = p.basis_z_mask();
    const Complex f = weights[k] * i_power(p.phase() + static_cast<unsigned>(p.y_count()));
    // P|j> = f (-1)^{|j&z|} |j^x>, so P[j^x][j] = f (-1)^{|j&z|}.
    for (std::size_t j = 0; j < dim; ++j) out.data_[((j ^ x) << n) | j] += f * parity_sign(j & z);
  }
  return out;
}

void DensityMatrix::apply_rotation(const PauliString &generator, double angle) {
  require(generator.size() == n_, ErrorKind::SizeMismatch, "rotation generator size mismatch");
  require(generator.is_hermitian(), ErrorKind::InvalidArgument, "rotation generator must be Hermitian");
  const Complex f = i_power(generator.phase() + static_cast<unsigned>(generator.y_count()));
  const std::uint64_t x = generator.basis_x_mask();
  const std::uint64_t z = generator.basis_z_mask();
  const double c = std::cos(angle / 2);
  const Complex mix = -kI * std::sin(angle / 2) * f;
  const Complex cmix = std::conj(mix);
  const std::uint64_t dim = dimension();
  Complex *a = data_.data();
  if (x == 0) {
    // Diagonal: entry (r, col) scales by u(r) conj(u(col)).
    const Complex up = c + mix, um = c - mix;
    std::vector<Complex> col_factor(dim);
    for (std::uint64_t col = 0; col < dim; ++col) col_factor[col] = std::conj((std::popcount(col & z) & 1) ? um : up);
    for (std::uint64_t r = 0; r < dim; ++r) {
      const Complex rf = (std::popcount(r & z) & 1) ? um : up;
      Complex *row = a + (r << n_);
      for (std::uint64_t col = 0; col < dim; ++col) row[col] *= rf * col_factor[col];
    }
    return;
  }
  const unsigned hb = 63u - static_cast<unsigned>(std::countl_zero(x));
  const std::uint64_t hbit = std::uint64_t{1} << hb;
  for (std::uint64_t r = 0; r < dim; ++r) {
    if (r & hbit) continue;
    const std::uint64_t rx = r ^ x;
    const double sr = parity_sign(r & z), srx = parity_sign(rx & z);
    Complex *row0 = a + (r << n_);
    Complex *row1 = a + (rx << n_);
    for (std::uint64_t col = 0; col < dim; ++col) {
      if (col & hbit) continue;
      const std::uint64_t cx = col ^ x;
      const double sc = parity_sign(col & z), scx = parity_sign(cx & z);
      const Complex A = row0[col], B = row0[cx], C = row1[col], D = row1[cx];
      const Complex A1 = c * A + mix * srx * C;
      const Complex C1 = c * C + mix * sr * A;
      const Complex B1 = c * B + mix * srx * D;
      const Complex D1 = c * D + mix * sr * B;
      row0[col] = c * A1 + cmix * scx * B1;
      row0[cx] = c * B1 + cmix * sc * A1;
      row1[col] = c * C1 + cmix * scx * D1;
      row1[cx] = c * D1 + cmix * sc * C1;
    }
  }
}

namespace {

// Per-index factor prod_g (cos(a_g/2) - i sin(a_g/2) (-1)^{|j & z_g|}) for diagonal generators.
std::vector<Complex> diagonal_factors(std::size_t n, std::span<const PauliString> generators,
                                      std::span<const double> angles) {
  require(generators.size() == angles.size(), ErrorKind::SizeMismatch, "one angle per generator is required");
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<Complex> out(dim, Complex(1, 0));
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const auto &p = generators[g];
    require(p.size() == n, ErrorKind::SizeMismatch, "rotation generator size mismatch");
    require(p.basis_x_mask() == 0 && p.is_hermitian(), ErrorKind::InvalidArgument, "generator is not diagonal");
    const std::uint64_t z = p.basis_z_mask();
    const Complex mix = -kI * std::sin(angles[g] / 2) * i_power(p.phase());
    const Complex up = std::cos(angles[g] / 2) + mix, um = std::cos(angles[g] / 2) - mix;
    for (std::uint64_t j = 0; j < dim; ++j) out[j] *= (std::popcount(j & z) & 1) ? um : up;
  }
  return out;
}

}  // namespace

void StateVector::apply_diagonal_rotations(std::span<const PauliString> generators, std::span<const double> angles) {
  auto f = diagonal_factors(n_, generators, angles);
  for (std::size_t j = 0; j < amps_.size(); ++j) amps_[j] *= f[j];
}

void DensityMatrix::apply_diagonal_rotations(std::span<const PauliString> generators,
                                             std::span<const double> angles) {
  auto f = diagonal_factors(n_, generators, angles);
  const std::uint64_t dim = dimension();
  std::vector<Complex> cf(dim);
  for (std::uint64_t j = 0; j < dim; ++j) cf[j] = std::conj(f[j]);
  for (std::uint64_t r = 0; r < dim; ++r) {
    Complex *row = data_.data() + (r << n_);
    const Complex rf = f[r];
    for (std::uint64_t col = 0; col < dim; ++col) row[col] *= rf * cf[col];
  }
}

void DensityMatrix::apply_unitary(const Eigen::MatrixXcd &u, std::span<const int> qubits) {
  check_unitary_shape(u, qubits.size());
  const auto bits = static_cast<unsigned>(2 * n_);
  dense_kernel(data_.data(), bits, u, positions(qubits, n_, static_cast<unsigned>(n_)));
  Eigen::MatrixXcd uc = u.conjugate();
  dense_kernel(data_.data(), bits, uc, positions(qubits, n_, 0));
}

namespace {

// Index with zeros inserted at the ascending bit positions `bits`.
inline std::uint64_t spread(std::uint64_t k, const std::uint64_t *bits, std::size_t count) {
  for (std::size_t t = 0; t < count; ++t) {
    const std::uint64_t low = bits[t] - 1;
    k = ((k & ~low) << 1) | (k & low);
  }
  return k;
}

// Pauli-transfer transform on one qubit's (r, c) slots: 00, 01, 10, 11 <-> I, X, Y, Z.
inline void to_pauli(Complex &s00, Complex &s01, Complex &s10, Complex &s11) {
  const Complex ii = s00 + s11, xx = s01 + s10, yy = kI * (s01 - s10), zz = s00 - s11;
  s00 = ii;
  s01 = xx;
  s10 = yy;
  s11 = zz;
}

inline void from_pauli(Complex &s00, Complex &s01, Complex &s10, Complex &s11) {
  const Complex ii = s00, xx = s01, yy = s10, zz = s11;
  s00 = 0.5 * (ii + zz);
  s11 = 0.5 * (ii - zz);
  s01 = 0.5 * (xx - kI * yy);
  s10 = 0.5 * (xx + kI * yy);
}


// Channel on M support qubits: per 4^M block, transform to the Pauli basis,
// scale by chi and transform back. Local slot s carries, for support qubit k,
// the row bit at 2(M-1-k)+1 and the column bit at 2(M-1-k), so the slot number
// equals the base-4 letter code of the Pauli it ends up holding.
template <std::size_t M>
void local_channel_kernel(Complex *a, std::size_t n, const std::vector<int> &support, const std::vector<double> &chi) {
  constexpr std::size_t kBlock = std::size_t{1} << (2 * M);
  std::array<std::uint64_t, M> row_bit{}, col_bit{};
  std::array<std::uint64_t, 2 * M> sorted{};
  for (std::size_t k = 0; k < M; ++k) {
    const auto b = static_cast<unsigned>(n - 1 - static_cast<std::size_t>(support[k]));
    col_bit[k] = std::uint64_t{1} << b;
    row_bit[k] = col_bit[k] << n;
    sorted[2 * k] = col_bit[k];
    sorted[2 * k + 1] = row_bit[k];
  }
  std::sort(sorted.begin(), sorted.end());
  std::array<std::uint64_t, kBlock> offsets{};
  for (std::size_t s = 0; s < kBlock; ++s) {
    for (std::size_t k = 0; k < M; ++k) {
      const std::size_t shift = 2 * (M - 1 - k);
      if ((s >> shift) & 1u) offsets[s] |= col_bit[k];
      if ((s >> (shift + 1)) & 1u) offsets[s] |= row_bit[k];
    }
  }
  std::array<Complex, kBlock> local;
  const std::uint64_t blocks = (std::uint64_t{1} << (2 * n)) >> (2 * M);
  for (std::uint64_t k = 0; k < blocks; ++k) {
    const std::uint64_t base = spread(k, sorted.data(), sorted.size());
    for (std::size_t s = 0; s < kBlock; ++s) local[s] = a[base | offsets[s]];
    for (std::size_t q = 0; q < M; ++q) {
      const std::size_t shift = 2 * (M - 1 - q);
      const std::size_t step = std::size_t{1} << shift;
      for (std::size_t s = 0; s < kBlock; ++s) {
        if ((s >> shift) & 3u) continue;
        to_pauli(local[s], local[s + step], local[s + 2 * step], local[s + 3 * step]);
      }
    }
    for (std::size_t s = 0; s < kBlock; ++s) local[s] *= chi[s];
    for (std::size_t q = 0; q < M; ++q) {
      const std::size_t shift = 2 * (M - 1 - q);
      const std::size_t step = std::size_t{1} << shift;
      for (std::size_t s = 0; s < kBlock; ++s) {
        if ((s >> shift) & 3u) continue;
        from_pauli(local[s], local[s + step], local[s + 2 * step], local[s + 3 * step]);
      }
    }
    for (std::size_t s = 0; s < kBlock; ++s) a[base | offsets[s]] = local[s];
  }
}

}  // namespace

void DensityMatrix::apply_channel(const PauliChannel &ch) {
  require(ch.num_qubits() == n_, ErrorKind::SizeMismatch, "channel register size mismatch");
  const auto &support = ch.support();
  const std::size_t m = support.size();
  if (m == 0) return;
  require(m <= 4, ErrorKind::ResourceLimit, "dense channel application supports at most 4-local channels");
  // chi table indexed by base-4 letter codes (I, X, Y, Z), first support qubit most significant.
  auto locals = all_pauli_strings(m);
  std::vector<double> chi(locals.size());
  for (std::size_t k = 0; k < locals.size(); ++k) {
    double v = 0;
    for (const auto &t : ch.terms()) v += commutes(t.pauli, locals[k]) ? t.probability : -t.probability;
    chi[k] = v;
  }
  Complex *a = data_.data();
  const std::uint64_t dim = std::uint64_t{1} << (2 * n_);

  if (m == 1) {
    const double cx = chi[1], cy = chi[2], cz = chi[3];
    const double dp = 0.5 * (1 + cz), dm = 0.5 * (1 - cz), op = 0.5 * (cx + cy), om = 0.5 * (cx - cy);
    const auto b = static_cast<unsigned>(n_ - 1 - static_cast<std::size_t>(support[0]));
    const std::uint64_t colb = std::uint64_t{1} << b, rowb = colb << n_;
    std::uint64_t bits[2] = {colb, rowb};
    for (std::uint64_t k = 0; k < dim / 4; ++k) {
      const std::uint64_t base = spread(k, bits, 2);
      Complex &s00 = a[base], &s01 = a[base | colb], &s10 = a[base | rowb], &s11 = a[base | colb | rowb];
      const Complex A = s00, B = s01, C = s10, D = s11;
      s00 = dp * A + dm * D;
      s11 = dm * A + dp * D;
      s01 = op * B + om * C;
      s10 = om * B + op * C;
    }
    return;
  }

  switch (m) {
    case 2: local_channel_kernel<2>(a, n_, support, chi); break;
    case 3: local_channel_kernel<3>(a, n_, support, chi); break;
    default: local_channel_kernel<4>(a, n_, support, chi); break;
  }
}

void DensityMatrix::apply_channel(const DepolarizingChannel &ch) {
  ch.validate();
  require(ch.n == n_, ErrorKind::SizeMismatch, "channel register size mismatch");
  const Complex mixed = ch.p * trace() / static_cast<double>(dimension());
  for (auto &v : data_) v *= 1 - ch.p;
  for (std::size_t r = 0; r < dimension(); ++r) data_[(r << n_) | r] += mixed;
}

void DensityMatrix::apply_channel(const Channel &ch) {
  std::visit([this](const auto &c) { apply_channel(c); }, ch);
}

Complex DensityMatrix::trace() const {
  Complex t = 0;
  for (std::size_t r = 0; r < dimension(); ++r) t += data_[(r << n_) | r];
  return t;
}

double DensityMatrix::hermiticity_error() const {
  double worst = 0;
  for (std::size_t r = 0; r < dimension(); ++r) {
    for (std::size_t c = r; c < dimension(); ++c) {
      worst = std::max(worst, std::abs(data_[(r << n_) | c] - std::conj(data_[(c << n_) | r])));
    }
  }
  return worst;
}

Eigen::MatrixXcd DensityMatrix::to_matrix() const {
  require(n_ <= 8, ErrorKind::ResourceLimit, "dense export is limited to 8 qubits");
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = data_[(static_cast<std::size_t>(r) << n_) | static_cast<std::size_t>(c)];
  }
  return m;
}

// ---------------------------------------------------------------------------

double expectation(const StateVector &psi, const PauliString &s) {
  require(s.size() == psi.num_qubits(), ErrorKind::SizeMismatch, "observable size mismatch");
  const std::uint64_t x = s.basis_x_mask();
  const std::uint64_t z = s.basis_z_mask();
  const Complex f = i_power(s.phase() + static_cast<unsigned>(s.y_count()));
  const auto &a = psi.amplitudes();
  Complex acc = 0;
  for (std::uint64_t j = 0; j < a.size(); ++j) acc += std::conj(a[j ^ x]) * parity_sign(j & z) * a[j];
  return (f * acc).real();
}

double expectation(const DensityMatrix &rho, const PauliString &s) {
  require(s.size() == rho.num_qubits(), ErrorKind::SizeMismatch, "observable size mismatch");
  const std::uint64_t x = s.basis_x_mask();
  const std::uint64_t z = s.basis_z_mask();
  const Complex f = i_power(s.phase() + static_cast<unsigned>(s.y_count()));
  const auto &d = rho.data();
  const std::size_t n = rho.num_qubits();
  Complex acc = 0;
  for (std::uint64_t k = 0; k < rho.dimension(); ++k) acc += parity_sign(k & z) * d[(k << n) | (k ^ x)];
  return (f * acc).real();
}

std::vector<Complex> trace_products(const DensityMatrix &o, std::span<const PauliString> ps,
                                    const DensityMatrix &rho) {
  require(o.num_qubits() == rho.num_qubits(), ErrorKind::SizeMismatch, "trace_product size mismatch");
  const std::size_t n = rho.num_qubits();
  const std::size_t count = ps.size();
  std::vector<std::uint64_t> xs(count), zs(count);
  std::vector<Complex> acc(count, Complex(0, 0));
  for (std::size_t k = 0; k < count; ++k) {
    require(ps[k].size() == n, ErrorKind::SizeMismatch, "trace_product size mismatch");
    xs[k] = ps[k].basis_x_mask();
    zs[k] = ps[k].basis_z_mask();
  }
  const auto &od = o.data();
  const auto &rd = rho.data();
  const std::uint64_t dim = rho.dimension();
  // Tr(O P rho) = sum_{r,c} O[r][c] f (-1)^{|(c^x)&z|} conj(rho[r][c^x]) for Hermitian rho.
  for (std::uint64_t r = 0; r < dim; ++r) {
    const Complex *orow = &od[r << n];
    const Complex *rrow = &rd[r << n];
    for (std::size_t k = 0; k < count; ++k) {
      const std::uint64_t x = xs[k], z = zs[k];
      Complex sum = 0;
      for (std::uint64_t c = 0; c < dim; ++c) {
        const std::uint64_t j = c ^ x;
        sum += orow[c] * parity_sign(j & z) * std::conj(rrow[j]);
      }
      acc[k] += sum;
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    acc[k] *= i_power(ps[k].phase() + static_cast<unsigned>(ps[k].y_count()));
  }
  return acc;
}

Complex trace_product(const DensityMatrix &o, const PauliString &p, const DensityMatrix &rho) {
  return trace_products(o, std::span<const PauliString>(&p, 1), rho).front();
}

std::vector<double> gate_angles(const ParamCircuit &c, std::span<const double> theta) {
  require(theta.size() == c.num_params(), ErrorKind::SizeMismatch,
          "theta has " + std::to_string(theta.size()) + " entries but the circuit has " +
              std::to_string(c.num_params()) + " parameters");
  std::vector<double> out;
  out.reserve(c.num_gates());
  const auto &eps = c.epsilons();
  for (std::size_t k = 0; k < c.num_gates(); ++k) {
    const auto &g = c.gate(k);
    out.push_back(g.clifford_angle + theta[g.param] + (eps.empty() ? 0.0 : eps[g.param]));
  }
  return out;
}

namespace {

std::size_t first_flat_index(const ParamCircuit &c, std::size_t q) {
  // gate_refs are ordered moment by moment.
  const auto &refs = c.gate_refs();
  std::size_t lo = 0, hi = refs.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (refs[mid].moment < q) lo = mid + 1; else hi = mid;
  }
  return lo;
}

template <typename State>
void apply_moment_impl(State &s, const ParamCircuit &c, std::size_t q, std::span<const double> angles, double sign) {
  require(angles.size() == c.num_gates(), ErrorKind::SizeMismatch, "angle table does not match the circuit");
  const std::size_t first = first_flat_index(c, q);
  const auto &gates = c.moments()[q].gates;
  std::vector<PauliString> diag;
  std::vector<double> diag_angles;
  for (std::size_t k = 0; k < gates.size(); ++k) {
    PauliString p = gates[k].generator(c.num_qubits());
    if (p.basis_x_mask() == 0) {
      diag.push_back(std::move(p));
      diag_angles.push_back(sign * angles[first + k]);
    } else {
      s.apply_rotation(p, sign * angles[first + k]);
    }
  }
  if (diag.size() == 1) {
    s.apply_rotation(diag.front(), diag_angles.front());
  } else if (!diag.empty()) {
    s.apply_diagonal_rotations(diag, diag_angles);
  }
}

}  // namespace

void apply_moment(StateVector &psi, const ParamCircuit &c, std::size_t q, std::span<const double> angles) {
  apply_moment_impl(psi, c, q, angles, 1.0);
}

void apply_moment(DensityMatrix &rho, const ParamCircuit &c, std::size_t q, std::span<const double> angles) {
  apply_moment_impl(rho, c, q, angles, 1.0);
}

void unapply_moment(StateVector &psi, const ParamCircuit &c, std::size_t q, std::span<const double> angles) {
  apply_moment_impl(psi, c, q, angles, -1.0);
}

void unapply_moment(DensityMatrix &rho, const ParamCircuit &c, std::size_t q, std::span<const double> angles) {
  apply_moment_impl(rho, c, q, angles, -1.0);
}

StateVector run_pure_angles(const ParamCircuit &c, std::span<const double> angles) {
  StateVector psi(c.num_qubits());
  for (std::size_t q = 0; q < c.num_moments(); ++q) apply_moment(psi, c, q, angles);
  return psi;
}

StateVector run_pure(const ParamCircuit &c, std::span<const double> theta) {
  require(c.num_qubits() <= kMaxPureQubits, ErrorKind::ResourceLimit, "register exceeds the statevector ceiling");
  auto angles = gate_angles(c, theta);
  return run_pure_angles(c, angles);
}

DensityMatrix run_noisy_angles(const ParamCircuit &c, std::span<const double> angles, const NoiseLayout &layout) {
  layout.check_aligned(c);
  DensityMatrix rho(c.num_qubits());
  for (std::size_t q = 0; q < c.num_moments(); ++q) {
    apply_moment(rho, c, q, angles);
    for (const auto &ch : layout.moments[q]) rho.apply_channel(ch);
  }
  return rho;
}

DensityMatrix run_noisy(const ParamCircuit &c, std::span<const double> theta, const NoiseLayout &layout) {
  require(c.num_qubits() <= kMaxNoisyQubits, ErrorKind::ResourceLimit, "register exceeds the density-matrix ceiling");
  auto angles = gate_angles(c, theta);
  return run_noisy_angles(c, angles, layout);
}

}  // namespace vcem
