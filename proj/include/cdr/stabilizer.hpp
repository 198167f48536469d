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

#include <cstdint>
#include <vector>

#include "cdr/circuit.hpp"
#include "cdr/observable.hpp"

namespace cdr {

/// Aaronson-Gottesman tableau: rows 0..n-1 are destabilizers, rows n..2n-1
/// stabilizers, each a signed Pauli in (x, z) bit form with Y = (1, 1).
class StabilizerTableau {
 public:
  /// Tableau of |0...0>.
  explicit StabilizerTableau(int num_qubits);

  int num_qubits() const { return n_; }

  void h(int q);
  void s(int q);
  void cnot(int control, int target);
  /// Applies any Clifford gate of the gate set; throws for rotations.
  void apply(const Gate& g);
  void apply(const Circuit& c);

  /// <P> for a signed Pauli string: +-1 if +-P is in the stabilizer group,
  /// 0 otherwise.
  int expectation(const PauliString& p) const;

  /// Stabilizer generator i (0 <= i < n) as a signed Pauli string.
  PauliString stabilizer(int i) const;

 private:
  struct Row {
    std::vector<std::uint8_t> x;
    std::vector<std::uint8_t> z;
    std::uint8_t r = 0;
  };

  static int phase_exponent(int x1, int z1, int x2, int z2);
  // h <- h * i, tracking the sign.
  void rowmult(Row& h, const Row& i) const;

  int n_;
  std::vector<Row> rows_;
};

/// Expectation of a Pauli observable on the noise-free output of a Clifford
/// circuit, computed in O(n^2 l). Throws std::invalid_argument for rotations
/// or non-Pauli observables.
double stabilizer_expectation(const Circuit& c, const Observable& obs);

}  // namespace cdr
