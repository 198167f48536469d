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

#include <Eigen/Dense>

#include "cdr/observable.hpp"
#include "cdr/rng.hpp"

namespace cdr {

/// Tolerance on ||U^dag U - I|| (max entry) for accepting a matrix as unitary.
inline constexpr double kUnitarityTolerance = 1e-10;

/// U = sum_i exp(j 2 pi omega_i) |u_i><u_i| with omega_i in [0, 1).
///
/// The eigenbasis comes from a complex Schur decomposition: for a normal
/// matrix the Schur vectors are an orthonormal eigenbasis even inside
/// degenerate eigenspaces, and the triangular factor is diagonal up to
/// round-off.
class UnitarySpectrum {
 public:
  /// Throws std::invalid_argument if `u` is not square and unitary.
  explicit UnitarySpectrum(const Eigen::MatrixXcd& u);
  /// Spectrum with given orthonormal eigenvectors (columns) and phases.
  UnitarySpectrum(Eigen::MatrixXcd eigenvectors, std::vector<double> phases);

  std::size_t dim() const { return phases_.size(); }
  const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }
  const std::vector<double>& phases() const { return phases_; }
  /// |<0|u_i>|^2.
  std::vector<double> overlaps() const;
  /// Omega(U) = {omega_p - omega_q}, sorted, duplicates within 1e-12 merged.
  std::vector<double> frequencies() const;

  /// U^t = sum_i exp(j 2 pi omega_i t) |u_i><u_i|.
  Eigen::MatrixXcd power(double t) const;
  /// U^t |psi>.
  Eigen::VectorXcd apply_power(double t, const Eigen::VectorXcd& psi) const;

 private:
  Eigen::MatrixXcd vectors_;
  std::vector<double> phases_;
};

/// max |(U^dag U - I)_ij|.
double unitarity_residual(const Eigen::MatrixXcd& u);

/// g(t, U) = <0| (U^t)^dag O U^t |0>.
double g_of_t(const UnitarySpectrum& spec, const Observable& obs, double t);
double g_of_t(const Eigen::MatrixXcd& u, const Observable& obs, double t);

/// Y = sum_i exp(j 2 pi floor(p omega_i) / p) |u_i><u_i|: same eigenvectors,
/// phases snapped down to multiples of 1/p, so g(t, Y) has period p (or is
/// constant). Throws std::invalid_argument unless p is prime.
UnitarySpectrum periodic_approximant(const UnitarySpectrum& spec, unsigned p);
Eigen::MatrixXcd periodic_approximant(const Eigen::MatrixXcd& u, unsigned p);

/// || |a><a| - |b><b| ||_1 = 2 sqrt(1 - |<a|b>|^2) for unit vectors.
double pure_trace_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Haar-random unitary (QR of a complex Gaussian matrix with phase fix).
Eigen::MatrixXcd random_unitary(std::size_t dim, const RngStream& rng);
/// Haar-random unit vector.
Eigen::VectorXcd random_state(std::size_t dim, const RngStream& rng);

bool is_prime(unsigned p);

/// Real trigonometric polynomial a_0 + sum_{q=1}^{Q} a_q cos(2 pi q t / T) +
/// b_q sin(2 pi q t / T), i.e. sum_{|q|<=Q} c_q e^{-j 2 pi q t / T} with
/// c_{-q} = c_q^*.
struct FourierModel {
  double period = 1.0;
  std::vector<double> cos_coeffs;  // a_0..a_Q
  std::vector<double> sin_coeffs;  // b_0 (unused, 0)..b_Q

  double operator()(double t) const;
  std::size_t order() const { return cos_coeffs.empty() ? 0 : cos_coeffs.size() - 1; }
};

/// Least-squares fit of an order-Q model to samples (t_k, y_k), with a tiny
/// ridge term for numerical safety.
FourierModel fit_fourier(const std::vector<double>& t, const std::vector<double>& y, double period,
                         std::size_t order);

}  // namespace cdr
