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

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cdr/circuit.hpp"
#include "cdr/noise.hpp"
#include "cdr/observable.hpp"

namespace cdr {

/// Largest number of free rotations decompose_branches() will expand (3^12
/// branches).
inline constexpr std::size_t kMaxFreeRotations = 12;

/// Clifford substitute of a rotation: identity, the axis Pauli, or the axis
/// square root (rotation by pi/2).
enum class Substitute : int { Identity = 0, Pauli = 1, SqrtPauli = 2 };

/// Real coefficients of R(theta) rho R(theta)^dag over {rho, P rho P,
/// sqrtP rho sqrtP^dag}:
///   identity   = (1 + cos theta - sin theta) / 2
///   pauli      = (1 - cos theta - sin theta) / 2
///   sqrt_pauli = sin theta
/// They sum to one for every theta.
struct RotationCoefficients {
  double identity = 1.0;
  double pauli = 0.0;
  double sqrt_pauli = 0.0;

  double operator[](Substitute s) const;
  /// |identity| + |pauli| + |sqrt_pauli|.
  double l1_norm() const;
  /// |c_k| / l1_norm() for k in {Identity, Pauli, SqrtPauli}.
  std::array<double, 3> sampling_probabilities() const;
};

RotationCoefficients rotation_coefficients(double theta);

/// Gate that replaces `rotation` under the given substitute, on the same qubit.
Gate clifford_substitute(const Gate& rotation, Substitute s);

struct Branch {
  Circuit circuit;
  double weight = 0.0;
};

/// Linear expansion of a circuit's channel into Clifford(-ish) branches, one
/// per assignment of substitutes to the free rotations. Rotations not listed as
/// free stay in every branch circuit.
class BranchDecomposition {
 public:
  BranchDecomposition(std::vector<Branch> branches, std::size_t free_rotations);

  const std::vector<Branch>& branches() const { return branches_; }
  std::size_t free_rotations() const { return free_rotations_; }
  /// Sum of |w_i|.
  double normalization() const { return normalization_; }
  double weight_sum() const;
  int sign(std::size_t i) const { return branches_[i].weight < 0.0 ? -1 : 1; }

 private:
  std::vector<Branch> branches_;
  std::size_t free_rotations_;
  double normalization_;
};

/// Enumerates all 3^|free| branches. Throws std::invalid_argument when an id is
/// out of range or not a rotation, ResourceError beyond kMaxFreeRotations.
BranchDecomposition decompose_branches(const Circuit& c, std::span<const std::size_t> free_rotation_ids);

/// Product over the listed rotations of their coefficient l1 norms.
double normalization_factor(const Circuit& c, std::span<const std::size_t> rotation_ids);

/// Sum_i w_i Tr(O C~_i(|0><0|)). Noise-free Pauli observables on all-Clifford
/// branches go through the stabilizer backend.
double branch_expectation(const BranchDecomposition& bd, const NoiseModel& noise,
                          const Observable& obs);

}  // namespace cdr
