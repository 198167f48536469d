// Copyright 2026 The CDR Authors
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

#include "cdr/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace cdr {

namespace {

using namespace std::complex_literals;

// Applies a 2x2 matrix to the bit at position `bit` of every index.
void apply_1q(std::vector<cplx>& v, std::size_t bit, const Eigen::Matrix2cd& m) {
  const std::size_t stride = std::size_t{1} << bit;
  const cplx m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::size_t base = 0; base < v.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a = v[i];
      const cplx b = v[i + stride];
      v[i] = m00 * a + m01 * b;
      v[i + stride] = m10 * a + m11 * b;
    }
  }
}

// Permutes amplitudes by |c, t> -> |c, t xor c> on the given bit positions.
void apply_cx(std::vector<cplx>& v, std::size_t control_bit, std::size_t target_bit) {
  const std::size_t cmask = std::size_t{1} << control_bit;
  const std::size_t tmask = std::size_t{1} << target_bit;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(v[i], v[i | tmask]);
  }
}

void check_gate_fits(const Gate& g, int n) {
  if (g.qubits[0] >= n || g.qubits[1] >= n) {
    throw std::invalid_argument("gate acts outside the register");
  }
}

// Tr(P rho) for a matrix stored row-major in `rho` with dimension `dim`.
cplx pauli_trace(const PauliString& p, const std::vector<cplx>& rho, std::size_t dim) {
  const std::uint64_t xm = p.x_mask();
  const std::uint64_t zm = p.z_mask();
  static constexpr std::array<cplx, 4> kIPow{1.0, 1i, -1.0, -1i};
  const cplx global = static_cast<double>(p.sign()) * kIPow[p.y_count() % 4];
  cplx acc = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    const double s = (std::popcount(c & zm) & 1) ? -1.0 : 1.0;
    acc += s * rho[c * dim + (c ^ xm)];
  }
  return global * acc;
}

OutcomeDistribution pauli_distribution(const PauliString& p, double expectation) {
  if (p.is_identity()) return {{static_cast<double>(p.sign())}, {1.0}};
  const double plus = std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0);
  return {{-1.0, 1.0}, {1.0 - plus, plus}};
}

void normalize(std::vector<double>& probs) {
  double total = 0.0;
  for (double& q : probs) {
    q = std::max(q, 0.0);
    total += q;
  }
  if (total > 0.0) {
    for (double& q : probs) q /= total;
  }
}

}  // namespace

Eigen::Matrix2cd gate_matrix(const Gate& g) {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd m;
  auto rotation = [&m](Axis axis, double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    switch (axis) {
      case Axis::X: m << c, -1i * s, -1i * s, c; break;
      case Axis::Y: m << c, -s, s, c; break;
      case Axis::Z: m << std::exp(-0.5i * theta), 0, 0, std::exp(0.5i * theta); break;
    }
  };
  switch (g.kind) {
    case GateKind::I: m << 1, 0, 0, 1; break;
    case GateKind::X: m << 0, 1, 1, 0; break;
    case GateKind::Y: m << 0, -1i, 1i, 0; break;
    case GateKind::Z: m << 1, 0, 0, -1; break;
    case GateKind::H: m << r, r, r, -r; break;
    case GateKind::RX: rotation(Axis::X, g.angle); break;
    case GateKind::RY: rotation(Axis::Y, g.angle); break;
    case GateKind::RZ: rotation(Axis::Z, g.angle); break;
    case GateKind::SqrtX: rotation(Axis::X, std::numbers::pi / 2); break;
    case GateKind::SqrtY: rotation(Axis::Y, std::numbers::pi / 2); break;
    case GateKind::SqrtZ: rotation(Axis::Z, std::numbers::pi / 2); break;
    case GateKind::CNOT: throw std::invalid_argument("CNOT has no 2x2 matrix");
  }
  return m;
}

// ---------------------------------------------------------------- StateVector

StateVector StateVector::zero_state(int num_qubits) { return basis_state(num_qubits, 0); }

StateVector StateVector::basis_state(int num_qubits, std::size_t index) {
  if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
  if (num_qubits > kMaxStateVectorQubits) {
    throw ResourceError("state-vector backend limited to " +
                        std::to_string(kMaxStateVectorQubits) + " qubits");
  }
  std::vector<cplx> amp(std::size_t{1} << num_qubits, 0.0);
  amp.at(index) = 1.0;
  return StateVector(num_qubits, std::move(amp));
}

void StateVector::apply(const Gate& g) {
  check_gate_fits(g, n_);
  const auto bit = [this](int q) { return static_cast<std::size_t>(n_ - 1 - q); };
  if (g.is_two_qubit()) {
    apply_cx(amp_, bit(g.qubits[0]), bit(g.qubits[1]));
  } else if (g.kind != GateKind::I) {
    apply_1q(amp_, bit(g.qubits[0]), gate_matrix(g));
  }
}

void StateVector::apply(const Circuit& c) {
  if (c.num_qubits() != n_) throw std::invalid_argument("qubit count mismatch");
  for (const Gate& g : c.gates()) apply(g);
}

double StateVector::expectation(const Observable& obs) const {
  if (obs.num_qubits() != n_) throw std::invalid_argument("observable size mismatch");
  const std::size_t dim = amp_.size();
  if (obs.is_pauli()) {
    const PauliString& p = obs.pauli_string();
    const std::uint64_t xm = p.x_mask();
    const std::uint64_t zm = p.z_mask();
    static constexpr std::array<cplx, 4> kIPow{1.0, 1i, -1.0, -1i};
    // <psi|P|psi> = sum_c conj(psi[c ^ x]) phase(c) psi[c]
    cplx acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double s = (std::popcount(c & zm) & 1) ? -1.0 : 1.0;
      acc += std::conj(amp_[c ^ xm]) * s * amp_[c];
    }
    return (static_cast<double>(p.sign()) * kIPow[p.y_count() % 4] * acc).real();
  }
  const Eigen::Map<const Eigen::VectorXcd> psi(amp_.data(), static_cast<Eigen::Index>(dim));
  return psi.dot(obs.matrix() * psi).real();
}

// -------------------------------------------------------------- DensityMatrix

DensityMatrix DensityMatrix::zero_state(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
  if (num_qubits > kMaxDensityQubits) {
    throw ResourceError("density-matrix backend limited to " +
                        std::to_string(kMaxDensityQubits) + " qubits");
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  std::vector<cplx> rho(dim * dim, 0.0);
  rho[0] = 1.0;
  return DensityMatrix(num_qubits, std::move(rho));
}

void DensityMatrix::apply(const Gate& g) {
  check_gate_fits(g, n_);
  // Column qubit q lives at bit n-1-q, row qubit q at bit 2n-1-q.
  const auto col_bit = [this](int q) { return static_cast<std::size_t>(n_ - 1 - q); };
  const auto row_bit = [this](int q) { return static_cast<std::size_t>(2 * n_ - 1 - q); };
  if (g.is_two_qubit()) {
    apply_cx(rho_, row_bit(g.qubits[0]), row_bit(g.qubits[1]));
    apply_cx(rho_, col_bit(g.qubits[0]), col_bit(g.qubits[1]));
  } else if (g.kind != GateKind::I) {
    const Eigen::Matrix2cd m = gate_matrix(g);
    apply_1q(rho_, row_bit(g.qubits[0]), m);
    apply_1q(rho_, col_bit(g.qubits[0]), m.conjugate());
  }
}

void DensityMatrix::depolarize(int q, double p) {
  if (q < 0 || q >= n_) throw std::invalid_argument("qubit out of range");
  if (p == 0.0) return;
  const std::size_t cmask = std::size_t{1} << (n_ - 1 - q);
  const std::size_t rmask = std::size_t{1} << (2 * n_ - 1 - q);
  const double keep = 1.0 - p;
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    if (i & (cmask | rmask)) continue;
    cplx& a = rho_[i];
    cplx& b = rho_[i | cmask];
    cplx& c = rho_[i | rmask];
    cplx& d = rho_[i | rmask | cmask];
    const cplx mixed = 0.5 * p * (a + d);
    a = keep * a + mixed;
    d = keep * d + mixed;
    b *= keep;
    c *= keep;
  }
}

void DensityMatrix::depolarize_all(double p) {
  for (int q = 0; q < n_; ++q) depolarize(q, p);
}

void DensityMatrix::global_depolarize(double p) {
  if (p == 0.0) return;
  const std::size_t d = dim();
  for (auto& x : rho_) x *= (1.0 - p);
  for (std::size_t r = 0; r < d; ++r) rho_[r * d + r] += p / static_cast<double>(d);
}

double DensityMatrix::trace() const {
  double t = 0.0;
  for (std::size_t r = 0; r < dim(); ++r) t += rho_[r * dim() + r].real();
  return t;
}

double DensityMatrix::expectation(const Observable& obs) const {
  if (obs.num_qubits() != n_) throw std::invalid_argument("observable size mismatch");
  if (obs.is_pauli()) return pauli_trace(obs.pauli_string(), rho_, dim()).real();
  const Eigen::MatrixXcd o = obs.matrix();
  cplx acc = 0.0;
  const std::size_t d = dim();
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) acc += o(r, c) * rho_[c * d + r];
  }
  return acc.real();
}

Eigen::MatrixXcd DensityMatrix::matrix() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rho_[static_cast<std::size_t>(r * d + c)];
  }
  return m;
}

// ------------------------------------------------------------------ evolution

std::vector<std::vector<std::size_t>> greedy_layers(const Circuit& c) {
  std::vector<std::size_t> next_free(static_cast<std::size_t>(c.num_qubits()), 0);
  std::vector<std::vector<std::size_t>> layers;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c[i];
    std::size_t layer = next_free[static_cast<std::size_t>(g.qubits[0])];
    if (g.is_two_qubit()) {
      layer = std::max(layer, next_free[static_cast<std::size_t>(g.qubits[1])]);
    }
    if (layer == layers.size()) layers.emplace_back();
    layers[layer].push_back(i);
    next_free[static_cast<std::size_t>(g.qubits[0])] = layer + 1;
    if (g.is_two_qubit()) next_free[static_cast<std::size_t>(g.qubits[1])] = layer + 1;
  }
  return layers;
}

void evolve(DensityMatrix& rho, const Circuit& c, const NoiseModel& noise) {
  if (c.num_qubits() != rho.num_qubits()) throw std::invalid_argument("qubit count mismatch");
  switch (noise.kind) {
    case NoiseKind::None:
      for (const Gate& g : c.gates()) rho.apply(g);
      break;
    case NoiseKind::CnotDepolarizing:
      for (const Gate& g : c.gates()) {
        rho.apply(g);
        if (g.is_two_qubit()) {
          rho.depolarize(g.qubits[0], noise.p);
          rho.depolarize(g.qubits[1], noise.p);
        }
      }
      break;
    case NoiseKind::LayerDepolarizing:
      for (const auto& layer : greedy_layers(c)) {
        for (std::size_t i : layer) rho.apply(c[i]);
        rho.depolarize_all(noise.p);
      }
      break;
    case NoiseKind::GlobalDepolarizing:
      for (const Gate& g : c.gates()) rho.apply(g);
      rho.global_depolarize(noise.p);
      break;
  }
}

double OutcomeDistribution::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) m += values[k] * probabilities[k];
  return m;
}

OutcomeDistribution outcome_distribution(const DensityMatrix& rho, const Observable& obs) {
  if (obs.is_pauli()) return pauli_distribution(obs.pauli_string(), rho.expectation(obs));
  const Eigen::MatrixXcd m = rho.matrix();
  const Eigen::MatrixXcd& v = obs.eigenvectors();
  OutcomeDistribution dist{obs.eigenvalues(), {}};
  dist.probabilities.resize(dist.values.size());
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    dist.probabilities[static_cast<std::size_t>(k)] =
        v.col(k).dot(m * v.col(k)).real();
  }
  normalize(dist.probabilities);
  return dist;
}

OutcomeDistribution outcome_distribution(const StateVector& psi, const Observable& obs) {
  if (obs.is_pauli()) return pauli_distribution(obs.pauli_string(), psi.expectation(obs));
  const auto& amp = psi.amplitudes();
  const Eigen::Map<const Eigen::VectorXcd> vec(amp.data(), static_cast<Eigen::Index>(amp.size()));
  const Eigen::MatrixXcd& v = obs.eigenvectors();
  OutcomeDistribution dist{obs.eigenvalues(), {}};
  dist.probabilities.resize(dist.values.size());
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    dist.probabilities[static_cast<std::size_t>(k)] = std::norm(v.col(k).dot(vec));
  }
  normalize(dist.probabilities);
  return dist;
}

double sample_mean(const OutcomeDistribution& dist, std::size_t shots, std::mt19937_64& eng) {
  if (shots == 0) throw std::invalid_argument("need at least one shot");
  std::size_t remaining = shots;
  double remaining_mass = 1.0;
  double total = 0.0;
  const std::size_t k_last = dist.values.size() - 1;
  for (std::size_t k = 0; k < k_last && remaining > 0; ++k) {
    const double q =
        remaining_mass > 0.0 ? std::clamp(dist.probabilities[k] / remaining_mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::size_t> draw(remaining, q);
    const std::size_t count = draw(eng);
    total += static_cast<double>(count) * dist.values[k];
    remaining -= count;
    remaining_mass -= dist.probabilities[k];
  }
  total += static_cast<double>(remaining) * dist.values[k_last];
  return total / static_cast<double>(shots);
}

double sample_once(const OutcomeDistribution& dist, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(eng);
  for (std::size_t k = 0; k + 1 < dist.values.size(); ++k) {
    if (x < dist.probabilities[k]) return dist.values[k];
    x -= dist.probabilities[k];
  }
  return dist.values.back();
}

double exact_expectation(const Circuit& c, const NoiseModel& noise, const Observable& obs) {
  if (obs.num_qubits() != c.num_qubits()) throw std::invalid_argument("observable size mismatch");
  if (noise.kind == NoiseKind::None) return noiseless_expectation(c, obs);
  auto rho = DensityMatrix::zero_state(c.num_qubits());
  evolve(rho, c, noise);
  return rho.expectation(obs);
}

double noiseless_expectation(const Circuit& c, const Observable& obs) {
  auto psi = StateVector::zero_state(c.num_qubits());
  psi.apply(c);
  return psi.expectation(obs);
}

OutcomeDistribution circuit_outcomes(const Circuit& c, const NoiseModel& noise,
                                     const Observable& obs) {
  if (obs.num_qubits() != c.num_qubits()) throw std::invalid_argument("observable size mismatch");
  if (noise.kind == NoiseKind::None) {
    auto psi = StateVector::zero_state(c.num_qubits());
    psi.apply(c);
    return outcome_distribution(psi, obs);
  }
  auto rho = DensityMatrix::zero_state(c.num_qubits());
  evolve(rho, c, noise);
  return outcome_distribution(rho, obs);
}

double empirical_mean(const Circuit& c, const NoiseModel& noise, const Observable& obs,
                      std::size_t shots, const RngStream& rng) {
  if (shots == 0) throw std::invalid_argument("need at least one shot");
  auto eng = rng.engine();
  return sample_mean(circuit_outcomes(c, noise, obs), shots, eng);
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  if (c.num_qubits() > kMaxDensityQubits) throw ResourceError("unitary too large");
  const std::size_t dim = std::size_t{1} << c.num_qubits();
  Eigen::MatrixXcd u(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    auto psi = StateVector::basis_state(c.num_qubits(), col);
    psi.apply(c);
    for (std::size_t r = 0; r < dim; ++r) {
      u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = psi.amplitudes()[r];
    }
  }
  return u;
}

}  // namespace cdr
