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

#include <complex>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cdr/circuit.hpp"
#include "cdr/noise.hpp"
#include "cdr/observable.hpp"
#include "cdr/rng.hpp"

namespace cdr {

/// Thrown when a request would exceed a backend's size guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest qubit count accepted by the density-matrix backend.
inline constexpr int kMaxDensityQubits = 12;
/// Largest qubit count accepted by the state-vector backend.
inline constexpr int kMaxStateVectorQubits = 24;

/// 2x2 unitary of a single-qubit gate. Rotations are exp(-i angle P / 2) and
/// SqrtP is the rotation by pi/2 about P.
Eigen::Matrix2cd gate_matrix(const Gate& g);

/// Pure state on n qubits; qubit q is bit n-1-q of a basis index.
class StateVector {
 public:
  static StateVector zero_state(int num_qubits);
  static StateVector basis_state(int num_qubits, std::size_t index);

  int num_qubits() const { return n_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  void apply(const Gate& g);
  void apply(const Circuit& c);
  double expectation(const Observable& obs) const;

 private:
  StateVector(int n, std::vector<cplx> amp) : n_(n), amp_(std::move(amp)) {}

  int n_;
  std::vector<cplx> amp_;
};

/// Mixed state on n qubits stored row-major as a 2^n x 2^n matrix.
class DensityMatrix {
 public:
  static DensityMatrix zero_state(int num_qubits);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  cplx operator()(std::size_t row, std::size_t col) const { return rho_[row * dim() + col]; }

  void apply(const Gate& g);
  /// Single-qubit depolarizing channel on qubit q.
  void depolarize(int q, double p);
  /// Single-qubit depolarizing on every qubit.
  void depolarize_all(double p);
  /// rho -> (1-p) rho + p I / 2^n.
  void global_depolarize(double p);

  double trace() const;
  double expectation(const Observable& obs) const;
  Eigen::MatrixXcd matrix() const;

 private:
  DensityMatrix(int n, std::vector<cplx> rho) : n_(n), rho_(std::move(rho)) {}

  int n_;
  std::vector<cplx> rho_;
};

/// ASAP packing of gates into layers of pairwise disjoint qubits. Each entry
/// lists gate indices of one layer in circuit order.
std::vector<std::vector<std::size_t>> greedy_layers(const Circuit& c);

/// Runs `c` on `rho` under `noise`.
void evolve(DensityMatrix& rho, const Circuit& c, const NoiseModel& noise);

/// Eigenvalues of an observable with the probabilities of observing each of
/// them on some state.
struct OutcomeDistribution {
  std::vector<double> values;
  std::vector<double> probabilities;

  double mean() const;
};

OutcomeDistribution outcome_distribution(const DensityMatrix& rho, const Observable& obs);
OutcomeDistribution outcome_distribution(const StateVector& psi, const Observable& obs);

/// Mean of `shots` independent draws from `dist` (drawn as multinomial counts).
double sample_mean(const OutcomeDistribution& dist, std::size_t shots, std::mt19937_64& eng);
/// One draw from `dist`.
double sample_once(const OutcomeDistribution& dist, std::mt19937_64& eng);

/// Tr(O rho_out) with rho_out the output of `c` under `noise` from |0..0>.
double exact_expectation(const Circuit& c, const NoiseModel& noise, const Observable& obs);

/// Noise-free f(U) computed on the state-vector backend.
double noiseless_expectation(const Circuit& c, const Observable& obs);

/// Outcome distribution of measuring `obs` on the noisy output of `c`.
OutcomeDistribution circuit_outcomes(const Circuit& c, const NoiseModel& noise,
                                     const Observable& obs);

/// Average of `shots` measurement outcomes of `obs` on the noisy output of `c`.
double empirical_mean(const Circuit& c, const NoiseModel& noise, const Observable& obs,
                      std::size_t shots, const RngStream& rng);

/// Dense 2^n x 2^n unitary of a circuit.
Eigen::MatrixXcd circuit_unitary(const Circuit& c);

}  // namespace cdr
