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

#include "cdr/branches.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cdr/simulator.hpp"
#include "cdr/stabilizer.hpp"

namespace cdr {

double RotationCoefficients::operator[](Substitute s) const {
  switch (s) {
    case Substitute::Identity: return identity;
    case Substitute::Pauli: return pauli;
    case Substitute::SqrtPauli: return sqrt_pauli;
  }
  return 0.0;
}

double RotationCoefficients::l1_norm() const {
  return std::abs(identity) + std::abs(pauli) + std::abs(sqrt_pauli);
}

std::array<double, 3> RotationCoefficients::sampling_probabilities() const {
  const double z = l1_norm();
  return {std::abs(identity) / z, std::abs(pauli) / z, std::abs(sqrt_pauli) / z};
}

RotationCoefficients rotation_coefficients(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {0.5 * (1.0 + c - s), 0.5 * (1.0 - c - s), s};
}

Gate clifford_substitute(const Gate& rotation, Substitute s) {
  const Axis axis = rotation.axis();
  const int q = rotation.qubits[0];
  switch (s) {
    case Substitute::Identity: return Gate::single(GateKind::I, q);
    case Substitute::Pauli:
      return Gate::single(axis == Axis::X ? GateKind::X : axis == Axis::Y ? GateKind::Y : GateKind::Z, q);
    case Substitute::SqrtPauli:
      return Gate::single(
          axis == Axis::X ? GateKind::SqrtX : axis == Axis::Y ? GateKind::SqrtY : GateKind::SqrtZ, q);
  }
  throw std::invalid_argument("bad substitute");
}

BranchDecomposition::BranchDecomposition(std::vector<Branch> branches, std::size_t free_rotations)
    : branches_(std::move(branches)), free_rotations_(free_rotations), normalization_(0.0) {
  for (const auto& b : branches_) normalization_ += std::abs(b.weight);
}

double BranchDecomposition::weight_sum() const {
  return std::accumulate(branches_.begin(), branches_.end(), 0.0,
                         [](double acc, const Branch& b) { return acc + b.weight; });
}

namespace {

void check_rotation_ids(const Circuit& c, std::span<const std::size_t> ids) {
  std::vector<bool> seen(c.size(), false);
  for (std::size_t id : ids) {
    if (id >= c.size()) throw std::invalid_argument("rotation id out of range");
    if (!c[id].is_rotation()) throw std::invalid_argument("gate id does not refer to a rotation");
    if (seen[id]) throw std::invalid_argument("rotation id listed twice");
    seen[id] = true;
  }
}

}  // namespace

double normalization_factor(const Circuit& c, std::span<const std::size_t> rotation_ids) {
  check_rotation_ids(c, rotation_ids);
  double n = 1.0;
  for (std::size_t id : rotation_ids) n *= rotation_coefficients(c[id].angle).l1_norm();
  return n;
}

BranchDecomposition decompose_branches(const Circuit& c,
                                       std::span<const std::size_t> free_rotation_ids) {
  check_rotation_ids(c, free_rotation_ids);
  const std::size_t free = free_rotation_ids.size();
  if (free > kMaxFreeRotations) {
    throw ResourceError("branch expansion limited to " + std::to_string(kMaxFreeRotations) +
                        " free rotations");
  }
  std::vector<RotationCoefficients> coeffs;
  coeffs.reserve(free);
  for (std::size_t id : free_rotation_ids) coeffs.push_back(rotation_coefficients(c[id].angle));

  std::size_t count = 1;
  for (std::size_t i = 0; i < free; ++i) count *= 3;

  std::vector<Branch> branches;
  branches.reserve(count);
  std::vector<Gate> gates = c.gates();
  for (std::size_t code = 0; code < count; ++code) {
    double weight = 1.0;
    std::size_t rest = code;
    for (std::size_t k = 0; k < free; ++k) {
      const auto s = static_cast<Substitute>(rest % 3);
      rest /= 3;
      weight *= coeffs[k][s];
      gates[free_rotation_ids[k]] = clifford_substitute(c[free_rotation_ids[k]], s);
    }
    branches.push_back({Circuit(c.num_qubits(), gates, Provenance::Training), weight});
  }
  return BranchDecomposition(std::move(branches), free);
}

double branch_expectation(const BranchDecomposition& bd, const NoiseModel& noise,
                          const Observable& obs) {
  double total = 0.0;
  for (const auto& b : bd.branches()) {
    if (b.weight == 0.0) continue;
    double value;
    if (noise.kind == NoiseKind::None && obs.is_pauli() && b.circuit.is_clifford()) {
      value = stabilizer_expectation(b.circuit, obs);
    } else {
      value = exact_expectation(b.circuit, noise, obs);
    }
    total += b.weight * value;
  }
  return total;
}

}  // namespace cdr
