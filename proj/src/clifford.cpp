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

#include "vcem/clifford.hpp"

#include <bit>
#include <cmath>

#include "vcem/error.hpp"

namespace vcem {

PauliString conjugate_by_rotation(const PauliString &p, const PauliString &generator, int quarter_turns) {
  int k = ((quarter_turns % 4) + 4) % 4;
  if (k == 0 || commutes(p, generator)) return p;
  if (k == 2) {
    PauliString out = p;
    out.set_phase(static_cast<std::uint8_t>(p.phase() + 2));
    return out;
  }
  // exp(-i pi/4 G) P exp(i pi/4 G) = -i G P for anticommuting G, P; k = 3 flips the sign.
  PauliString out = multiply(generator, p);
  out.set_phase(static_cast<std::uint8_t>(out.phase() + (k == 1 ? 3 : 1)));
  return out;
}

CliffordMap::CliffordMap(std::size_t n) {
  for (std::size_t q = 0; q < n; ++q) {
    x_images_.push_back(PauliString::single(n, q, 'X'));
    z_images_.push_back(PauliString::single(n, q, 'Z'));
  }
}

CliffordMap CliffordMap::from_unitary(const Eigen::MatrixXcd &u) {
  require(u.rows() == u.cols(), ErrorKind::InvalidArgument, "Clifford extraction needs a square matrix");
  auto dim = static_cast<std::size_t>(u.rows());
  require(std::has_single_bit(dim), ErrorKind::InvalidArgument, "dimension is not a power of two");
  auto n = static_cast<std::size_t>(std::countr_zero(dim));
  require(n <= 4, ErrorKind::InvalidArgument, "dense Clifford extraction is limited to 4 qubits");
  CliffordMap out(n);
  auto image_of = [&](const PauliString &p) {
    Eigen::MatrixXcd conj = u * to_dense(p) * u.adjoint();
    auto terms = decompose(conj);
    require(terms.size() == 1, ErrorKind::InvalidArgument, "conjugator is not Clifford");
    Complex c = terms.front().coefficient;
    PauliString image = terms.front().pauli;
    if (std::abs(c - 1.0) < 1e-10) {
      image.set_phase(0);
    } else if (std::abs(c + 1.0) < 1e-10) {
      image.set_phase(2);
    } else {
      fail(ErrorKind::InvalidArgument, "conjugator is not Clifford");
    }
    return image;
  };
  for (std::size_t q = 0; q < n; ++q) {
    out.x_images_[q] = image_of(PauliString::single(n, q, 'X'));
    out.z_images_[q] = image_of(PauliString::single(n, q, 'Z'));
  }
  return out;
}

CliffordMap CliffordMap::hadamard(std::size_t n, int q) {
  // H = e^{i pi/2} Rz(pi/2) Rx(pi/2) Rz(pi/2).
  CliffordMap out(n);
  auto z = PauliString::single(n, static_cast<std::size_t>(q), 'Z');
  auto x = PauliString::single(n, static_cast<std::size_t>(q), 'X');
  out.append_rotation(z, 1);
  out.append_rotation(x, 1);
  out.append_rotation(z, 1);
  return out;
}

CliffordMap CliffordMap::cnot(std::size_t n, int control, int target) {
  CliffordMap out(n);
  PauliString zx(n);
  zx.set_letter(static_cast<std::size_t>(control), 'Z');
  zx.set_letter(static_cast<std::size_t>(target), 'X');
  out.append_rotation(zx, -1);
  out.append_rotation(PauliString::single(n, static_cast<std::size_t>(control), 'Z'), 1);
  out.append_rotation(PauliString::single(n, static_cast<std::size_t>(target), 'X'), 1);
  return out;
}

CliffordMap CliffordMap::cz(std::size_t n, int a, int b) {
  CliffordMap out = hadamard(n, b);
  out.append(cnot(n, a, b));
  out.append(hadamard(n, b));
  return out;
}

void CliffordMap::append_rotation(const PauliString &generator, int quarter_turns) {
  require(generator.size() == num_qubits(), ErrorKind::SizeMismatch, "rotation generator size mismatch");
  for (auto &img : x_images_) img = conjugate_by_rotation(img, generator, quarter_turns);
  for (auto &img : z_images_) img = conjugate_by_rotation(img, generator, quarter_turns);
}

void CliffordMap::append(const CliffordMap &later) {
  require(later.num_qubits() == num_qubits(), ErrorKind::SizeMismatch, "Clifford maps differ in size");
  for (auto &img : x_images_) img = later.conjugate(img);
  for (auto &img : z_images_) img = later.conjugate(img);
}

PauliString CliffordMap::conjugate(const PauliString &p) const {
  require(p.size() == num_qubits(), ErrorKind::SizeMismatch, "Pauli string size does not match Clifford map");
  PauliString out(num_qubits());
  out.set_phase(p.phase());
  for (std::size_t q = 0; q < num_qubits(); ++q) {
    bool xb = p.x(q);
    bool zb = p.z(q);
    if (xb) out = multiply(out, x_images_[q]);
    if (zb) out = multiply(out, z_images_[q]);
    if (xb && zb) out.set_phase(static_cast<std::uint8_t>(out.phase() + 1));  // Y = i X Z
  }
  return out;
}

CliffordMap clifford_part(const ParamCircuit &c, std::size_t first, std::size_t last) {
  require(first <= last && last <= c.num_moments(), ErrorKind::InvalidArgument, "moment range out of bounds");
  CliffordMap out(c.num_qubits());
  for (std::size_t m = first; m < last; ++m) {
    for (const auto &g : c.moments()[m].gates) {
      out.append_rotation(g.generator(c.num_qubits()), g.quarter_turns());
    }
  }
  return out;
}

PauliString heisenberg_through(const ParamCircuit &c, std::size_t first, std::size_t last, const PauliString &s) {
  require(first <= last && last <= c.num_moments(), ErrorKind::InvalidArgument, "moment range out of bounds");
  PauliString out = s;
  for (std::size_t m = last; m-- > first;) {
    const auto &gates = c.moments()[m].gates;
    for (std::size_t j = gates.size(); j-- > 0;) {
      out = conjugate_by_rotation(out, gates[j].generator(c.num_qubits()), -gates[j].quarter_turns());
    }
  }
  return out;
}

}  // namespace vcem
