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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cdr/rng.hpp"

namespace cdr {

enum class GateKind { CNOT, RX, RY, RZ, I, X, Y, Z, SqrtX, SqrtY, SqrtZ, H };

enum class Axis { X, Y, Z };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);
std::string_view to_string(Axis axis);
Axis axis_from_string(std::string_view name);

/// Maps any real angle onto [0, 2*pi).
double canonical_angle(double radians);

struct Gate {
  GateKind kind = GateKind::I;
  /// Radians in [0, 2*pi); meaningful only for RX/RY/RZ.
  double angle = 0.0;
  /// qubits[1] is -1 for single-qubit gates. For CNOT: {control, target}.
  std::array<int, 2> qubits{0, -1};

  static Gate cnot(int control, int target);
  static Gate rotation(Axis axis, int qubit, double angle);
  static Gate single(GateKind kind, int qubit);

  bool is_rotation() const;
  bool is_two_qubit() const { return kind == GateKind::CNOT; }
  bool is_clifford() const { return !is_rotation(); }
  /// Rotation axis; throws std::invalid_argument for non-rotations.
  Axis axis() const;

  friend bool operator==(const Gate&, const Gate&) = default;
};

enum class Provenance { None, Random, Qft, Training, Folded, Insertion };

std::string_view to_string(Provenance p);

/// Ordered gate list over a fixed number of qubits. Gate indices are validated
/// on construction and append.
class Circuit {
 public:
  explicit Circuit(int num_qubits, Provenance provenance = Provenance::None);
  Circuit(int num_qubits, std::vector<Gate> gates,
          Provenance provenance = Provenance::None);

  int num_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  const Gate& operator[](std::size_t i) const { return gates_[i]; }
  Provenance provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = p; }

  void append(const Gate& g);
  void append(const Circuit& other);

  bool is_clifford() const;
  std::size_t cnot_count() const;
  /// Indices of RX/RY/RZ gates, in circuit order.
  std::vector<std::size_t> rotation_indices() const;

  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.n_ == b.n_ && a.gates_ == b.gates_;
  }

 private:
  void validate(const Gate& g) const;

  int n_;
  std::vector<Gate> gates_;
  Provenance provenance_;
};

/// Random circuit with `num_gates` gates drawn uniformly from {RX, RY, RZ,
/// CNOT}. Rotation angles are uniform on [0, 2*pi), single-qubit targets are
/// uniform, CNOT pairs uniform over ordered distinct pairs. When `min_cnots`
/// is set, randomly chosen rotations are replaced by random CNOTs until the
/// CNOT count reaches it.
Circuit random_circuit(int num_qubits, std::size_t num_gates, const RngStream& rng,
                       std::optional<std::size_t> min_cnots = std::nullopt);

/// Random circuit over the Clifford gate set {H, SqrtX, SqrtY, SqrtZ, X, Y, Z,
/// CNOT}; used by backend-equivalence checks.
Circuit random_clifford_circuit(int num_qubits, std::size_t num_gates,
                                const RngStream& rng);

/// Hadamard layer followed by the quantum Fourier transform, with every
/// controlled phase expanded into RZ and CNOT gates and the final qubit
/// reversal written as CNOT triples.
Circuit qft_circuit(int num_qubits);

/// Appends the expansion of a controlled phase CP(theta) (equal up to a global
/// phase) to `c`.
void append_controlled_phase(Circuit& c, int control, int target, double theta);

/// Incremental CNOT folding: step i inserts one CNOT pair right after the
/// (((i-1) mod k) + 1)-th original CNOT. The result has k + 2*steps CNOTs.
Circuit fold_cnots(const Circuit& c, std::size_t steps);

/// Uniform folding: every CNOT is followed by `pairs_per_cnot` extra pairs,
/// i.e. noise factor 2*pairs_per_cnot + 1.
Circuit fold_cnots_uniform(const Circuit& c, std::size_t pairs_per_cnot);

/// Effective noise factor of `fold_cnots(c, steps)`: 1 + 2*steps/k.
double fold_noise_factor(std::size_t cnot_count, std::size_t steps);

/// One single-qubit rotation of the inserted layer V.
struct LayerRotation {
  int qubit = 0;
  Axis axis = Axis::X;
  double angle = 0.0;
  friend bool operator==(const LayerRotation&, const LayerRotation&) = default;
};

/// Returns U2 V^t U1 where U1 = gates[0, split) and U2 = gates[split, end).
/// V^t is realized as one rotation per layer entry with angle t * angle.
Circuit insert_layer(const Circuit& c, std::size_t split,
                     std::span<const LayerRotation> layer, double t);

nlohmann::json to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);

}  // namespace cdr
