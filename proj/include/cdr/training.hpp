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

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "cdr/branches.hpp"
#include "cdr/circuit.hpp"
#include "cdr/observable.hpp"
#include "cdr/rng.hpp"

namespace cdr {

/// A near-Clifford training circuit W and its noise-free label f(W).
struct TrainingPair {
  Circuit circuit;
  double f = 0.0;
  /// Product of the signs of the chosen coefficients, s_U(W).
  int sign = 1;
  /// Substitute chosen for each substituted rotation, aligned with
  /// TrainingSet::substituted_ids.
  std::vector<Substitute> choices;
};

struct TrainingSet {
  std::vector<TrainingPair> pairs;
  /// Rotation indices of U kept as-is in every W.
  std::vector<std::size_t> fixed_ids;
  /// Rotation indices of U replaced by Clifford substitutes.
  std::vector<std::size_t> substituted_ids;
  /// Product over substituted rotations of |c1| + |c2| + |c3|.
  double n_theta = 1.0;

  std::size_t size() const { return pairs.size(); }
};

/// Picks `n_fixed` of U's rotations uniformly at random to keep and builds `S`
/// circuits in which every other rotation is replaced independently by I, its
/// Pauli or its square root, with probability proportional to |c_k(theta)|.
/// Throws std::invalid_argument when U has fewer than n_fixed rotations.
TrainingSet generate_training_set(const Circuit& u, std::size_t S, std::size_t n_fixed,
                                  const RngStream& rng, const Observable& obs);

/// Same, with the kept rotations given explicitly.
TrainingSet generate_training_set(const Circuit& u, std::size_t S,
                                  std::vector<std::size_t> fixed_ids, const RngStream& rng,
                                  const Observable& obs);

/// n_fixed rotation indices of `u` drawn uniformly without replacement,
/// returned in circuit order.
std::vector<std::size_t> choose_fixed_rotations(const Circuit& u, std::size_t n_fixed,
                                                const RngStream& rng);

nlohmann::json to_json(const TrainingSet& ts);

}  // namespace cdr
