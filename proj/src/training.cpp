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

#include "cdr/training.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "cdr/simulator.hpp"

namespace cdr {

std::vector<std::size_t> choose_fixed_rotations(const Circuit& u, std::size_t n_fixed,
                                                const RngStream& rng) {
  std::vector<std::size_t> rotations = u.rotation_indices();
  if (n_fixed > rotations.size()) {
    throw std::invalid_argument("cannot keep " + std::to_string(n_fixed) + " rotations of a circuit with " +
                                std::to_string(rotations.size()));
  }
  auto eng = rng.engine();
  // Partial Fisher-Yates; the first n_fixed entries are a uniform subset.
  for (std::size_t i = 0; i < n_fixed; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, rotations.size() - 1);
    std::swap(rotations[i], rotations[pick(eng)]);
  }
  rotations.resize(n_fixed);
  std::sort(rotations.begin(), rotations.end());
  return rotations;
}

TrainingSet generate_training_set(const Circuit& u, std::size_t S, std::size_t n_fixed,
                                  const RngStream& rng, const Observable& obs) {
  return generate_training_set(u, S, choose_fixed_rotations(u, n_fixed, rng.child(0)), rng, obs);
}

TrainingSet generate_training_set(const Circuit& u, std::size_t S,
                                  std::vector<std::size_t> fixed_ids, const RngStream& rng,
                                  const Observable& obs) {
  if (obs.num_qubits() != u.num_qubits()) throw std::invalid_argument("observable size mismatch");
  std::sort(fixed_ids.begin(), fixed_ids.end());
  for (std::size_t id : fixed_ids) {
    if (id >= u.size() || !u[id].is_rotation()) {
      throw std::invalid_argument("fixed id does not refer to a rotation");
    }
  }
  TrainingSet ts;
  ts.fixed_ids = fixed_ids;
  for (std::size_t id : u.rotation_indices()) {
    if (!std::binary_search(fixed_ids.begin(), fixed_ids.end(), id)) ts.substituted_ids.push_back(id);
  }

  std::vector<RotationCoefficients> coeffs;
  std::vector<std::discrete_distribution<int>> choose;
  for (std::size_t id : ts.substituted_ids) {
    coeffs.push_back(rotation_coefficients(u[id].angle));
    const auto probs = coeffs.back().sampling_probabilities();
    choose.emplace_back(probs.begin(), probs.end());
    ts.n_theta *= coeffs.back().l1_norm();
  }

  ts.pairs.reserve(S);
  const RngStream samples = rng.child(1);
  for (std::size_t i = 0; i < S; ++i) {
    auto eng = samples.child(i).engine();
    std::vector<Gate> gates = u.gates();
    TrainingPair pair{Circuit(u.num_qubits()), 0.0, 1, {}};
    pair.choices.reserve(ts.substituted_ids.size());
    for (std::size_t k = 0; k < ts.substituted_ids.size(); ++k) {
      const auto s = static_cast<Substitute>(choose[k](eng));
      pair.choices.push_back(s);
      if (coeffs[k][s] < 0.0) pair.sign = -pair.sign;
      gates[ts.substituted_ids[k]] = clifford_substitute(u[ts.substituted_ids[k]], s);
    }
    pair.circuit = Circuit(u.num_qubits(), std::move(gates), Provenance::Training);
    pair.f = noiseless_expectation(pair.circuit, obs);
    ts.pairs.push_back(std::move(pair));
  }
  return ts;
}

nlohmann::json to_json(const TrainingSet& ts) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : ts.pairs) {
    nlohmann::json choices = nlohmann::json::array();
    for (Substitute s : p.choices) choices.push_back(static_cast<int>(s));
    pairs.push_back({{"circuit", to_json(p.circuit)}, {"f", p.f}, {"sign", p.sign}, {"choices", choices}});
  }
  return {{"fixed_ids", ts.fixed_ids},
          {"substituted_ids", ts.substituted_ids},
          {"n_theta", ts.n_theta},
          {"pairs", pairs}};
}

}  // namespace cdr
