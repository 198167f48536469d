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
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "cdr/observable.hpp"
#include "cdr/rng.hpp"
#include "cdr/spectrum.hpp"

namespace cdr {

/// Outcome of checking lhs <= rhs. `holds` is lhs <= rhs + 1e-9; `slack` is
/// rhs - lhs. `parameters` echoes the inputs and any extra measurements.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  double slack = 0.0;
  nlohmann::json parameters = nlohmann::json::object();

  static BoundReport make(std::string name, double lhs, double rhs,
                          nlohmann::json parameters = nlohmann::json::object());
};

nlohmann::json to_json(const BoundReport& r);

/// Absolute tolerance used by BoundReport::holds.
inline constexpr double kBoundTolerance = 1e-9;

// ---- Fourier approximation of g(t, U) ----

/// C = 3 sqrt(1 + 4 pi^2 / 3).
double fourier_approximation_constant();

/// 2 ||O|| (C 1{Q < p} p / Q + sin(2 pi t / p)). Throws std::invalid_argument
/// unless 0 <= t <= p / 4, Q >= 1 and p >= 2.
double fourier_approximation_bound(unsigned p, std::size_t Q, double t, double obs_norm);

/// Fits a Fourier model of order min(Q, p - 1) to g(t, Y) (Y the periodic
/// approximant of U) on 4p uniform samples of one period, then compares
/// max_t |g(t, U) - model(t)| over `t_grid` with the bound; the report's lhs
/// and rhs are taken at the point of least slack.
BoundReport verify_fourier_approximation(const Eigen::MatrixXcd& u, const Observable& obs,
                                         unsigned p, std::size_t Q,
                                         const std::vector<double>& t_grid);

/// Checks || Y^t psi - U^t psi ||_1 <= 2 sin(2 pi t / p) on every t in
/// `t_grid` (which must lie in [0, p / 4]) for |0...0> and every state in
/// `states`. Reports the point of least slack.
BoundReport verify_periodic_approximant(const Eigen::MatrixXcd& u, unsigned p,
                                        const std::vector<double>& t_grid,
                                        const std::vector<Eigen::VectorXcd>& states = {});

// ---- Lipschitz continuity of g(t, U) ----

/// sqrt(4 pi^2 + 16 pi^4 / 3).
double lipschitz_constant_factor();
/// 2 ||O|| sqrt(4 pi^2 + 16 pi^4 / 3).
double lipschitz_bound(double obs_norm);

/// Samples `trials` pairs (t1, t2) uniformly from [0, t_max]^2 and reports the
/// worst |g(t1) - g(t2)| / |t1 - t2| against lipschitz_bound.
BoundReport verify_lipschitz(const Eigen::MatrixXcd& u, const Observable& obs, std::size_t trials,
                             const RngStream& rng, double t_max = 8.0);

// ---- Estimation error ----

/// ||alpha|| ||O|| / sqrt(N) + residual.
double expected_error_bound(const Eigen::VectorXd& alpha, double obs_norm, std::size_t shots,
                            double residual);

/// Right-hand side of the generalization bound:
///   N(theta)/S sum_i |r_i| + ceil(||alpha||) ||O|| N(theta) sqrt(J+1)/sqrt(S)
///       * (2 + sqrt(72 ln(8 ceil(||alpha||)^2 / delta)))
/// with ceil(||alpha||) taken as at least 1. Throws std::invalid_argument for
/// S = 0, delta outside (0, 1) or obs_norm < 1.
double generalization_bound_rhs(const std::vector<double>& training_abs_residuals,
                                double alpha_norm, double obs_norm, std::size_t J, std::size_t S,
                                double delta, double n_theta);

/// ((3 (1/4 + 1/pi))^l, (6/pi)^l): bounds on E[N(theta)] for l substituted
/// rotations with uniform angles.
std::pair<double, double> expected_ntheta_bounds(std::size_t ell_r);

/// Binary entropy in bits; H(0) = H(1) = 0.
double binary_entropy(double p);

struct LowerBoundVariant {
  /// 0 selects the global variant; d >= 1 the layered variant of depth d.
  std::size_t depth = 0;
};

/// ((1 - P_eps - beta) log2 M - H(P_eps)) / (n (1 - p)), or divided by
/// n (1 - p)^{2d} for the layered variant. Throws std::domain_error for p = 1
/// and std::invalid_argument for inputs out of range.
double sample_complexity_lower_bound(double M, double p_eps, double beta, std::size_t n, double p,
                                     LowerBoundVariant variant = {});

}  // namespace cdr
