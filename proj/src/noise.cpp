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

#include "vcem/noise.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "vcem/error.hpp"
#include "vcem/random.hpp"

namespace vcem {

namespace {

struct LettersHash {
  std::size_t operator()(const PauliString &p) const noexcept { return p.letters_hash(); }
};
struct LettersEqual {
  bool operator()(const PauliString &a, const PauliString &b) const noexcept { return a.same_letters(b); }
};

std::vector<int> union_support(const std::vector<int> &a, const std::vector<int> &b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PauliString strip_phase(PauliString p) {
  p.set_phase(0);
  return p;
}

}  // namespace

PauliChannel::PauliChannel(std::size_t n, std::vector<int> support, std::vector<ChannelTerm> terms) : n_(n) {
  std::vector<int> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::InvalidArgument,
          "channel support has repeated qubits");
  for (int q : sorted) {
    require(q >= 0 && static_cast<std::size_t>(q) < n, ErrorKind::InvalidArgument, "channel support out of range");
  }
  // Reorder term letters to the sorted support.
  std::vector<int> order;
  for (int q : sorted) order.push_back(static_cast<int>(std::find(support.begin(), support.end(), q) - support.begin()));
  support_ = sorted;

  std::unordered_map<PauliString, double, LettersHash, LettersEqual> merged;
  std::vector<PauliString> order_seen;
  double total = 0;
  for (auto &t : terms) {
    require(t.pauli.size() == support.size(), ErrorKind::SizeMismatch, "channel term does not match support size");
    require(std::isfinite(t.probability) && t.probability >= 0, ErrorKind::InvalidArgument,
            "channel probabilities must be non-negative");
    PauliString local = strip_phase(t.pauli.restricted(order));
    auto [it, inserted] = merged.emplace(local, 0.0);
    if (inserted) order_seen.push_back(local);
    it->second += t.probability;
    total += t.probability;
  }
  require(std::abs(total - 1.0) < 1e-9, ErrorKind::InvalidArgument, "channel probabilities must sum to 1");
  PauliString id(support_.size());
  if (!merged.count(id)) {
    merged.emplace(id, 0.0);
    order_seen.insert(order_seen.begin(), id);
  }
  // Identity first, remaining terms in first-seen order.
  std::stable_partition(order_seen.begin(), order_seen.end(),
                        [](const PauliString &p) { return p.is_identity_letters(); });
  for (auto &p : order_seen) terms_.push_back({merged.at(p), p});
}

PauliChannel PauliChannel::identity(std::size_t n) { return PauliChannel(n, {}, {{1.0, PauliString(0)}}); }

PauliChannel PauliChannel::from_labels(const std::vector<std::pair<double, std::string>> &terms) {
  require(!terms.empty(), ErrorKind::InvalidArgument, "channel needs at least one term");
  std::size_t n = PauliString::from_label(terms.front().second).size();
  std::vector<int> support(n);
  for (std::size_t q = 0; q < n; ++q) support[q] = static_cast<int>(q);
  std::vector<ChannelTerm> out;
  for (const auto &[p, label] : terms) {
    PauliString s = PauliString::from_label(label);
    require(s.size() == n, ErrorKind::SizeMismatch, "channel labels differ in length");
    out.push_back({p, s});
  }
  return PauliChannel(n, support, std::move(out));
}

double PauliChannel::identity_probability() const {
  for (const auto &t : terms_) {
    if (t.pauli.is_identity_letters()) return t.probability;
  }
  return 0;
}

double PauliChannel::probability_of(const PauliString &full) const {
  require(full.size() == n_, ErrorKind::SizeMismatch, "probability_of: size mismatch");
  for (std::size_t q = 0; q < n_; ++q) {
    if (full.letter(q) != 'I' && !std::binary_search(support_.begin(), support_.end(), static_cast<int>(q))) return 0;
  }
  PauliString local = full.restricted(support_);
  double total = 0;
  for (const auto &t : terms_) {
    if (t.pauli.same_letters(strip_phase(local))) total += t.probability;
  }
  return total;
}

std::vector<ChannelTerm> PauliChannel::full_terms() const {
  std::vector<ChannelTerm> out;
  out.reserve(terms_.size());
  for (const auto &t : terms_) out.push_back({t.probability, t.pauli.embedded(n_, support_)});
  return out;
}

void PauliChannel::require_weak() const {
  require(identity_probability() >= 0.5 - 1e-15, ErrorKind::InvalidArgument,
          "Pauli channel identity probability is below 1/2");
}

void DepolarizingChannel::validate() const {
  require(std::isfinite(p) && p >= 0 && p <= 1, ErrorKind::InvalidArgument, "depolarizing p must lie in [0, 1]");
}

NoiseLayout NoiseLayout::noiseless(std::size_t num_moments) {
  NoiseLayout out;
  out.moments.resize(num_moments);
  return out;
}

bool NoiseLayout::all_pauli() const {
  for (const auto &m : moments) {
    for (const auto &ch : m) {
      if (!std::holds_alternative<PauliChannel>(ch)) return false;
    }
  }
  return true;
}

bool NoiseLayout::empty() const {
  for (const auto &m : moments) {
    if (!m.empty()) return false;
  }
  return true;
}

void NoiseLayout::check_aligned(const ParamCircuit &c) const {
  require(moments.size() == c.num_moments(), ErrorKind::SizeMismatch,
          "noise layout has " + std::to_string(moments.size()) + " moments but the circuit has " +
              std::to_string(c.num_moments()));
  for (const auto &m : moments) {
    for (const auto &ch : m) {
      std::size_t n = std::visit([](const auto &x) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, PauliChannel>) {
          return x.num_qubits();
        } else {
          return x.n;
        }
      }, ch);
      require(n == c.num_qubits(), ErrorKind::SizeMismatch, "channel register size does not match the circuit");
    }
  }
}

void GenericChannel::validate() const {
  require(n >= 1 && n <= 2, ErrorKind::InvalidArgument, "generic channels support 1 or 2 qubits");
  require(!kraus.empty(), ErrorKind::InvalidArgument, "channel needs at least one Kraus operator");
  auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto &k : kraus) {
    require(k.rows() == dim && k.cols() == dim, ErrorKind::SizeMismatch, "Kraus operator has the wrong shape");
    sum += k.adjoint() * k;
  }
  require((sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10, ErrorKind::InvalidArgument,
          "channel is not trace preserving");
}

GenericChannel GenericChannel::amplitude_damping(double gamma) {
  require(gamma >= 0 && gamma <= 1, ErrorKind::InvalidArgument, "damping gamma must lie in [0, 1]");
  Eigen::MatrixXcd e0 = Eigen::MatrixXcd::Zero(2, 2);
  Eigen::MatrixXcd e1 = Eigen::MatrixXcd::Zero(2, 2);
  e0(0, 0) = 1;
  e0(1, 1) = std::sqrt(1 - gamma);
  e1(0, 1) = std::sqrt(gamma);
  return {1, {e0, e1}};
}

GenericChannel GenericChannel::from_pauli(const PauliChannel &ch) {
  require(ch.num_qubits() >= 1 && ch.num_qubits() <= 2, ErrorKind::InvalidArgument, "needs a 1- or 2-qubit channel");
  GenericChannel out{ch.num_qubits(), {}};
  for (const auto &t : ch.full_terms()) out.kraus.push_back(std::sqrt(t.probability) * to_dense(t.pauli));
  return out;
}

GenericChannel GenericChannel::unitary(const Eigen::MatrixXcd &u) {
  auto dim = static_cast<std::size_t>(u.rows());
  require(dim == 2 || dim == 4, ErrorKind::InvalidArgument, "unitary channel needs a 2x2 or 4x4 matrix");
  return {dim == 2 ? std::size_t{1} : std::size_t{2}, {u}};
}

double chi_factor(const PauliChannel &ch, const PauliString &s) {
  require(s.size() == ch.num_qubits(), ErrorKind::SizeMismatch, "chi_factor: register size mismatch");
  PauliString local = s.restricted(ch.support());
  double gamma = 0;
  for (const auto &t : ch.terms()) {
    if (!commutes(t.pauli, local)) gamma += t.probability;
  }
  return 1 - 2 * gamma;
}

double chi_factor(const DepolarizingChannel &ch, const PauliString &s) {
  require(s.size() == ch.n, ErrorKind::SizeMismatch, "chi_factor: register size mismatch");
  return s.is_identity_letters() ? 1.0 : 1.0 - ch.p;
}

double chi_factor(const Channel &ch, const PauliString &s) {
  return std::visit([&](const auto &c) { return chi_factor(c, s); }, ch);
}

PauliChannel depolarizing_as_pauli(const DepolarizingChannel &d) {
  d.validate();
  require(d.n <= 3, ErrorKind::ResourceLimit, "explicit depolarizing expansion is limited to 3 qubits");
  std::vector<int> support(d.n);
  for (std::size_t q = 0; q < d.n; ++q) support[q] = static_cast<int>(q);
  auto strings = all_pauli_strings(d.n);
  double share = d.p / static_cast<double>(strings.size());
  std::vector<ChannelTerm> terms;
  for (auto &s : strings) {
    terms.push_back({s.is_identity_letters() ? 1 - d.p + share : share, s});
  }
  return PauliChannel(d.n, support, std::move(terms));
}

double compose_depolarizing(std::span<const double> ps) {
  double keep = 1;
  for (double p : ps) {
    require(std::isfinite(p) && p >= 0 && p <= 1, ErrorKind::InvalidArgument, "depolarizing p must lie in [0, 1]");
    keep *= 1 - p;
  }
  return 1 - keep;
}

PauliChannel compose(const PauliChannel &a, const PauliChannel &b) {
  require(a.num_qubits() == b.num_qubits(), ErrorKind::SizeMismatch, "compose: register size mismatch");
  std::vector<int> support = union_support(a.support(), b.support());
  std::size_t n = a.num_qubits();
  auto lift = [&](const PauliChannel &ch) {
    std::vector<ChannelTerm> out;
    for (const auto &t : ch.full_terms()) out.push_back({t.probability, t.pauli.restricted(support)});
    return out;
  };
  auto ta = lift(a);
  auto tb = lift(b);
  std::unordered_map<PauliString, double, LettersHash, LettersEqual> acc;
  std::vector<PauliString> order;
  for (const auto &x : ta) {
    for (const auto &y : tb) {
      double w = x.probability * y.probability;
      if (w == 0) continue;
      PauliString prod = strip_phase(multiply(x.pauli, y.pauli));
      auto [it, inserted] = acc.emplace(prod, 0.0);
      if (inserted) order.push_back(prod);
      it->second += w;
    }
  }
  std::vector<ChannelTerm> terms;
  double kept = 0;
  for (auto &p : order) {
    double w = acc.at(p);
    if (w < kCompositionPruneThreshold && !p.is_identity_letters()) continue;
    terms.push_back({w, p});
    kept += w;
  }
  for (auto &t : terms) t.probability /= kept;
  return PauliChannel(n, support, std::move(terms));
}

PauliChannel conjugate_channel(const PauliChannel &ch, const CliffordMap &u) {
  require(u.num_qubits() == ch.num_qubits(), ErrorKind::SizeMismatch, "conjugate_channel: register size mismatch");
  std::vector<PauliString> images;
  std::vector<int> support;
  for (const auto &t : ch.full_terms()) {
    PauliString img = strip_phase(u.conjugate(t.pauli));
    support = union_support(support, img.support());
    images.push_back(std::move(img));
  }
  std::vector<ChannelTerm> terms;
  for (std::size_t j = 0; j < images.size(); ++j) {
    terms.push_back({ch.terms()[j].probability, images[j].restricted(support)});
  }
  return PauliChannel(ch.num_qubits(), support, std::move(terms));
}

PauliChannel conjugate_channel(const PauliChannel &ch, const Eigen::MatrixXcd &u) {
  return conjugate_channel(ch, CliffordMap::from_unitary(u));
}

double EndChannel::chi(const PauliString &s) const {
  double dep = s.is_identity_letters() ? 1.0 : 1.0 - depolarizing;
  return chi_factor(pauli, s) * dep;
}

EndChannel effective_end_channel(const NoiseLayout &layout, std::span<const CliffordMap> moment_cliffords) {
  require(layout.num_moments() == moment_cliffords.size(), ErrorKind::SizeMismatch,
          "noise layout is misaligned with the circuit moments");
  require(!moment_cliffords.empty(), ErrorKind::InvalidArgument, "effective_end_channel needs at least one moment");
  std::size_t n = moment_cliffords.front().num_qubits();
  EndChannel out{PauliChannel::identity(n), 0.0};
  double keep = 1;
  CliffordMap later(n);  // Clifford part of moments after q.
  for (std::size_t q = layout.num_moments(); q-- > 0;) {
    for (const auto &ch : layout.moments[q]) {
      if (const auto *dep = std::get_if<DepolarizingChannel>(&ch)) {
        dep->validate();
        require(dep->n == n, ErrorKind::SizeMismatch, "channel register size mismatch");
        keep *= 1 - dep->p;
      } else {
        out.pauli = compose(out.pauli, conjugate_channel(std::get<PauliChannel>(ch), later));
      }
    }
    CliffordMap next = moment_cliffords[q];
    next.append(later);
    later = std::move(next);
  }
  out.depolarizing = 1 - keep;
  return out;
}

EndChannel effective_end_channel(const NoiseLayout &layout, const ParamCircuit &c) {
  layout.check_aligned(c);
  std::vector<CliffordMap> cliffords;
  cliffords.reserve(c.num_moments());
  for (std::size_t q = 0; q < c.num_moments(); ++q) cliffords.push_back(clifford_part(c, q, q + 1));
  return effective_end_channel(layout, cliffords);
}

std::vector<double> effective_chi_factors(const NoiseLayout &layout, const ParamCircuit &c,
                                          std::span<const PauliString> observables) {
  layout.check_aligned(c);
  std::vector<double> out;
  out.reserve(observables.size());
  for (const auto &s : observables) {
    require(s.size() == c.num_qubits(), ErrorKind::SizeMismatch, "observable size does not match the circuit");
    double chi = 1;
    PauliString pulled = s;  // U_{>q}^dagger s U_{>q}
    for (std::size_t q = c.num_moments(); q-- > 0;) {
      for (const auto &ch : layout.moments[q]) chi *= chi_factor(ch, pulled);
      pulled = heisenberg_through(c, q, q + 1, pulled);
    }
    out.push_back(chi);
  }
  return out;
}

PauliChannel pauli_twirl(const GenericChannel &g) {
  g.validate();
  auto strings = all_pauli_strings(g.n);
  std::vector<double> weights(strings.size(), 0.0);
  for (const auto &e : g.kraus) {
    for (const auto &term : decompose(e)) {
      auto it = std::find_if(strings.begin(), strings.end(),
                             [&](const PauliString &s) { return s.same_letters(term.pauli); });
      weights[static_cast<std::size_t>(it - strings.begin())] += std::norm(term.coefficient);
    }
  }
  std::vector<int> support(g.n);
  for (std::size_t q = 0; q < g.n; ++q) support[q] = static_cast<int>(q);
  std::vector<ChannelTerm> terms;
  double total = 0;
  for (double w : weights) total += w;
  for (std::size_t k = 0; k < strings.size(); ++k) {
    if (weights[k] > 0 || strings[k].is_identity_letters()) terms.push_back({weights[k] / total, strings[k]});
  }
  return PauliChannel(g.n, support, std::move(terms));
}

std::vector<Eigen::Matrix2cd> single_qubit_cliffords() {
  Eigen::Matrix2cd h, s;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  s << 1, 0, 0, Complex(0, 1);
  // Canonical representative modulo global phase: first nonzero entry real positive.
  auto canonical = [](Eigen::Matrix2cd m) {
    for (Eigen::Index k = 0; k < 4; ++k) {
      Complex v = m(k / 2, k % 2);
      if (std::abs(v) > 1e-9) {
        m *= std::conj(v) / std::abs(v);
        break;
      }
    }
    return m;
  };
  auto same = [](const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b) {
    return (a - b).cwiseAbs().maxCoeff() < 1e-9;
  };
  std::vector<Eigen::Matrix2cd> group{Eigen::Matrix2cd::Identity()};
  for (std::size_t head = 0; head < group.size(); ++head) {
    for (const auto &gen : {h, s}) {
      Eigen::Matrix2cd next = canonical(gen * group[head]);
      bool seen = std::any_of(group.begin(), group.end(), [&](const Eigen::Matrix2cd &m) { return same(m, next); });
      if (!seen) group.push_back(next);
    }
  }
  return group;
}

Eigen::MatrixXcd superoperator(const GenericChannel &g) {
  g.validate();
  auto dim = static_cast<Eigen::Index>(std::size_t{1} << g.n);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
  for (const auto &k : g.kraus) {
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (Eigen::Index b = 0; b < dim; ++b) {
        out.block(a * dim, b * dim, dim, dim) += k(a, b) * k.conjugate();
      }
    }
  }
  return out;
}

Eigen::MatrixXcd twirl_superoperator(const Eigen::MatrixXcd &superop, std::span<const Eigen::MatrixXcd> group) {
  require(!group.empty(), ErrorKind::InvalidArgument, "twirl group is empty");
  Eigen::Index dim = group.front().rows();
  require(superop.rows() == dim * dim, ErrorKind::SizeMismatch, "superoperator does not match group dimension");
  auto conj_super = [dim](const Eigen::MatrixXcd &u) {
    Eigen::MatrixXcd out(dim * dim, dim * dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (Eigen::Index b = 0; b < dim; ++b) out.block(a * dim, b * dim, dim, dim) = u(a, b) * u.conjugate();
    }
    return out;
  };
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(superop.rows(), superop.cols());
  for (const auto &u : group) {
    acc += conj_super(u.adjoint()) * superop * conj_super(u);
  }
  return acc / static_cast<double>(group.size());
}

Eigen::MatrixXcd process_matrix(const Eigen::MatrixXcd &superop, std::size_t n) {
  auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  require(superop.rows() == dim * dim && superop.cols() == dim * dim, ErrorKind::SizeMismatch,
          "superoperator has the wrong shape");
  auto strings = all_pauli_strings(n);
  auto count = static_cast<Eigen::Index>(strings.size());
  // Columns of `basis` are vec(P_k); chi = B^dagger J B / d^2 with J the Choi matrix.
  Eigen::MatrixXcd basis(dim * dim, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    Eigen::MatrixXcd p = to_dense(strings[static_cast<std::size_t>(k)]);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index a = 0; a < dim; ++a) basis(i * dim + a, k) = p(i, a);
    }
  }
  // J[(i,a),(j,b)] = E(|a><b|)[i,j] = S[(i,j),(a,b)].
  Eigen::MatrixXcd choi(dim * dim, dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index b = 0; b < dim; ++b) choi(i * dim + a, j * dim + b) = superop(i * dim + j, a * dim + b);
      }
    }
  }
  return basis.adjoint() * choi * basis / static_cast<double>(dim * dim);
}

double off_diagonal_residual(const Eigen::MatrixXcd &chi) {
  double worst = 0;
  for (Eigen::Index k = 0; k < chi.rows(); ++k) {
    for (Eigen::Index l = 0; l < chi.cols(); ++l) {
      if (k != l) worst = std::max(worst, std::abs(chi(k, l)));
    }
  }
  return worst;
}

DepolarizingChannel clifford_twirl(const GenericChannel &g) {
  g.validate();
  require(g.n == 1, ErrorKind::InvalidArgument, "Clifford twirling is implemented for one qubit only");
  std::vector<Eigen::MatrixXcd> group;
  for (const auto &c : single_qubit_cliffords()) group.emplace_back(c);
  Eigen::MatrixXcd twirled = twirl_superoperator(superoperator(g), group);
  double d2 = 4;
  double p = (d2 - twirled.trace().real()) / (d2 - 1);
  return {1, std::clamp(p, 0.0, 1.0)};
}

PauliChannel sample_pauli_channel(std::size_t n, std::span<const int> support, double magnitude, std::uint64_t seed) {
  require(support.size() == 1 || support.size() == 2, ErrorKind::InvalidArgument,
          "sampled Pauli channels are 1- or 2-local");
  require(std::isfinite(magnitude) && magnitude >= 0, ErrorKind::InvalidArgument, "magnitude must be non-negative");
  auto engine = make_engine(seed, {0x5041554c49ull, support.size()});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto strings = all_pauli_strings(support.size());
  std::vector<ChannelTerm> terms;
  double rest = 0;
  for (std::size_t k = 1; k < strings.size(); ++k) {
    double w = magnitude * unit(engine);
    rest += w;
    terms.push_back({w, strings[k]});
  }
  require(1 - rest >= 0.5, ErrorKind::InvalidArgument, "sampled channel has identity probability below 1/2");
  terms.insert(terms.begin(), ChannelTerm{1 - rest, strings[0]});
  return PauliChannel(n, std::vector<int>(support.begin(), support.end()), std::move(terms));
}

namespace {

double parse_number(std::string_view text, const std::string &what) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(value), ErrorKind::Config,
          "invalid " + what + ": '" + std::string(text) + "'");
  return value;
}

}  // namespace

std::string NoiseSpec::to_string() const {
  std::ostringstream out;
  out.precision(17);
  if (end_only) out << "end:";
  switch (kind) {
    case Kind::None:
      return "none";
    case Kind::Depolarizing:
      out << "depol:p=" << p;
      break;
    case Kind::Pauli:
      out << "pauli:m=" << (one_local && two_local ? "1+2" : one_local ? "1" : "2") << ",mag=" << magnitude;
      break;
  }
  return out.str();
}

NoiseSpec parse_noise_spec(const std::string &text) {
  NoiseSpec spec;
  std::string_view rest = text;
  if (rest == "none" || rest.empty()) return spec;
  if (rest.rfind("end:", 0) == 0) {
    spec.end_only = true;
    rest.remove_prefix(4);
  }
  auto colon = rest.find(':');
  require(colon != std::string_view::npos, ErrorKind::Config, "noise spec must look like kind:key=value,...");
  std::string_view kind = rest.substr(0, colon);
  std::string_view args = rest.substr(colon + 1);
  std::vector<std::pair<std::string_view, std::string_view>> kv;
  while (!args.empty()) {
    auto comma = args.find(',');
    std::string_view item = args.substr(0, comma);
    auto eq = item.find('=');
    require(eq != std::string_view::npos, ErrorKind::Config, "noise spec item without '=': " + std::string(item));
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  if (kind == "depol") {
    spec.kind = NoiseSpec::Kind::Depolarizing;
    bool have_p = false;
    for (auto [k, v] : kv) {
      require(k == "p", ErrorKind::Config, "unknown depol key '" + std::string(k) + "'");
      spec.p = parse_number(v, "depolarizing p");
      have_p = true;
    }
    require(have_p && spec.p >= 0 && spec.p <= 1, ErrorKind::Config, "depol needs p in [0, 1]");
  } else if (kind == "pauli") {
    spec.kind = NoiseSpec::Kind::Pauli;
    bool have_mag = false;
    for (auto [k, v] : kv) {
      if (k == "m") {
        require(v == "1" || v == "2" || v == "1+2" || v == "12", ErrorKind::Config, "pauli m must be 1, 2 or 1+2");
        spec.one_local = v != "2";
        spec.two_local = v != "1";
      } else if (k == "mag") {
        spec.magnitude = parse_number(v, "pauli magnitude");
        have_mag = true;
      } else {
        fail(ErrorKind::Config, "unknown pauli key '" + std::string(k) + "'");
      }
    }
    if (!spec.one_local && !spec.two_local) spec.one_local = true;
    require(have_mag && spec.magnitude >= 0, ErrorKind::Config, "pauli needs mag >= 0");
  } else {
    fail(ErrorKind::Config, "unknown noise kind '" + std::string(kind) + "'");
  }
  return spec;
}

NoiseLayout build_noise_layout(const NoiseSpec &spec, const ParamCircuit &c, std::uint64_t seed) {
  NoiseLayout layout = NoiseLayout::noiseless(c.num_moments());
  if (spec.kind == NoiseSpec::Kind::None || c.num_moments() == 0) return layout;
  const std::size_t n = c.num_qubits();
  auto sample = [&](std::size_t moment, std::vector<int> support) {
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
      std::uint64_t tag = seed;
      auto engine = make_engine(tag, {moment, static_cast<std::uint64_t>(support.front()),
                                      support.size() > 1 ? static_cast<std::uint64_t>(support[1]) + 1 : 0, attempt});
      std::uint64_t channel_seed = engine();
      try {
        return sample_pauli_channel(n, support, spec.magnitude, channel_seed);
      } catch (const Error &) {
      }
    }
    fail(ErrorKind::Config, "pauli noise magnitude too large: identity probability stays below 1/2");
  };
  std::set<std::pair<int, int>> all_pairs;
  for (const auto &m : c.moments()) {
    for (const auto &g : m.gates) {
      if (g.kind == GateKind::Rzx) all_pairs.emplace(g.qubits[0], g.qubits[1]);
    }
  }
  std::size_t first = spec.end_only ? c.num_moments() - 1 : 0;
  for (std::size_t q = first; q < c.num_moments(); ++q) {
    auto &slot = layout.moments[q];
    if (spec.kind == NoiseSpec::Kind::Depolarizing) {
      slot.push_back(DepolarizingChannel{n, spec.p});
      continue;
    }
    if (spec.two_local) {
      if (spec.end_only) {
        for (auto [a, b] : all_pairs) slot.push_back(sample(q, {a, b}));
      } else {
        for (const auto &g : c.moments()[q].gates) {
          if (g.kind == GateKind::Rzx) slot.push_back(sample(q, g.qubits));
        }
      }
    }
    if (spec.one_local) {
      for (std::size_t qubit = 0; qubit < n; ++qubit) slot.push_back(sample(q, {static_cast<int>(qubit)}));
    }
  }
  return layout;
}

}  // namespace vcem
