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

#include "cdr/stabilizer.hpp"

#include <stdexcept>

namespace cdr {

StabilizerTableau::StabilizerTableau(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
  const auto n = static_cast<std::size_t>(num_qubits);
  rows_.assign(2 * n, Row{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0), 0});
  for (std::size_t i = 0; i < n; ++i) {
    rows_[i].x[i] = 1;      // destabilizer X_i
    rows_[i + n].z[i] = 1;  // stabilizer Z_i
  }
}

void StabilizerTableau::h(int q) {
  for (auto& row : rows_) {
    row.r ^= row.x[q] & row.z[q];
    std::swap(row.x[q], row.z[q]);
  }
}

void StabilizerTableau::s(int q) {
  for (auto& row : rows_) {
    row.r ^= row.x[q] & row.z[q];
    row.z[q] ^= row.x[q];
  }
}

void StabilizerTableau::cnot(int a, int b) {
  for (auto& row : rows_) {
    row.r ^= row.x[a] & row.z[b] & (row.x[b] ^ row.z[a] ^ 1);
    row.x[b] ^= row.x[a];
    row.z[a] ^= row.z[b];
  }
}

void StabilizerTableau::apply(const Gate& g) {
  const int q = g.qubits[0];
  if (q < 0 || q >= n_ || g.qubits[1] >= n_) throw std::invalid_argument("gate qubit out of range");
  switch (g.kind) {
    case GateKind::CNOT: cnot(g.qubits[0], g.qubits[1]); break;
    case GateKind::I: break;
    case GateKind::H: h(q); break;
    case GateKind::SqrtZ: s(q); break;
    case GateKind::X:
      for (auto& row : rows_) row.r ^= row.z[q];
      break;
    case GateKind::Z:
      for (auto& row : rows_) row.r ^= row.x[q];
      break;
    case GateKind::Y:
      for (auto& row : rows_) row.r ^= row.x[q] ^ row.z[q];
      break;
    case GateKind::SqrtX:  // exp(-i pi/4 X) ~ H S H
      h(q);
      s(q);
      h(q);
      break;
    case GateKind::SqrtY:  // exp(-i pi/4 Y) ~ H Z
      for (auto& row : rows_) row.r ^= row.x[q];
      h(q);
      break;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      throw std::invalid_argument("stabilizer backend cannot apply a rotation gate");
  }
}

void StabilizerTableau::apply(const Circuit& c) {
  if (c.num_qubits() != n_) throw std::invalid_argument("qubit count mismatch");
  for (const Gate& g : c.gates()) apply(g);
}

int StabilizerTableau::phase_exponent(int x1, int z1, int x2, int z2) {
  if (x1 == 0 && z1 == 0) return 0;
  if (x1 == 1 && z1 == 1) return z2 - x2;
  if (x1 == 1) return z2 * (2 * x2 - 1);
  return x2 * (1 - 2 * z2);
}

void StabilizerTableau::rowmult(Row& h, const Row& i) const {
  int sum = 2 * h.r + 2 * i.r;
  for (int j = 0; j < n_; ++j) {
    sum += phase_exponent(i.x[j], i.z[j], h.x[j], h.z[j]);
    h.x[j] ^= i.x[j];
    h.z[j] ^= i.z[j];
  }
  sum = ((sum % 4) + 4) % 4;
  h.r = sum == 0 ? 0 : 1;
}

int StabilizerTableau::expectation(const PauliString& p) const {
  if (p.num_qubits() != n_) throw std::invalid_argument("Pauli string size mismatch");
  auto anticommutes = [&](const Row& row) {
    int acc = 0;
    for (int j = 0; j < n_; ++j) acc ^= (row.x[j] & p.z(j)) ^ (row.z[j] & p.x(j));
    return acc != 0;
  };
  for (int i = n_; i < 2 * n_; ++i) {
    if (anticommutes(rows_[i])) return 0;
  }
  const auto n = static_cast<std::size_t>(n_);
  Row scratch{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0), 0};
  for (int i = 0; i < n_; ++i) {
    if (anticommutes(rows_[i])) rowmult(scratch, rows_[i + n_]);
  }
  for (int j = 0; j < n_; ++j) {
    if (scratch.x[j] != p.x(j) || scratch.z[j] != p.z(j)) {
      throw std::logic_error("stabilizer product does not reproduce the Pauli string");
    }
  }
  return (scratch.r ? -1 : 1) * p.sign();
}

PauliString StabilizerTableau::stabilizer(int i) const {
  const Row& row = rows_.at(static_cast<std::size_t>(i + n_));
  std::string s = row.r ? "-" : "+";
  for (int j = 0; j < n_; ++j) {
    s.push_back(row.x[j] ? (row.z[j] ? 'Y' : 'X') : (row.z[j] ? 'Z' : 'I'));
  }
  return PauliString::parse(s);
}

double stabilizer_expectation(const Circuit& c, const Observable& obs) {
  if (!obs.is_pauli()) throw std::invalid_argument("stabilizer backend needs a Pauli observable");
  if (!c.is_clifford()) throw std::invalid_argument("stabilizer backend needs a Clifford circuit");
  if (obs.num_qubits() != c.num_qubits()) throw std::invalid_argument("observable size mismatch");
  StabilizerTableau tab(c.num_qubits());
  tab.apply(c);
  return tab.expectation(obs.pauli_string());
}

}  // namespace cdr
