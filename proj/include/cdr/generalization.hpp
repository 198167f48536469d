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
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "cdr/circuit.hpp"
#include "cdr/feature_map.hpp"
#include "cdr/noise.hpp"
#include "cdr/observable.hpp"
#include "cdr/rng.hpp"
#include "cdr/training.hpp"

namespace cdr {

/// Terms of the generalization gap
///   Delta(U) = |N(theta)/S sum_i s_i (f(W_i) - alpha^T phi(W_i))| - |f(U) - alpha^T phi(U)|
/// with exact (infinite-shot) features.
struct GapTerms {
  double training_term = 0.0;
  double true_residual = 0.0;
  double n_theta = 1.0;
  double delta() const { return training_term - true_residual; }
};

/// Exact feature rows of every training circuit.
std::vector<std::vector<double>> exact_training_features(const TrainingSet& ts,
                                                         const FeatureMapSpec& spec,
                                                         const NoiseModel& noise,
                                                         const Observable& obs);

GapTerms generalization_gap(const TrainingSet& ts, const std::vector<std::vector<double>>& features,
                            const Eigen::VectorXd& alpha, double f_u,
                            const std::vector<double>& phi_u);

/// Ridge coefficients fitted on exact features of `ts`.
Eigen::VectorXd fit_exact_alpha(const TrainingSet& ts, const FeatureMapSpec& spec,
                                const NoiseModel& noise, const Observable& obs, double mu);

struct DeltaScalingConfig {
  int n = 3;
  std::size_t ell = 25;
  std::size_t min_cnots = 6;
  std::size_t n_fixed = 6;
  FeatureMapSpec spec = FeatureMapSpec::insertion_map(7);
  NoiseModel noise = NoiseModel::cnot_depolarizing(0.1);
  std::size_t alpha_training_size = 100;
  double mu = 1e-3;
  std::vector<std::size_t> S_values{25, 100, 400};
  std::size_t circuits = 200;
  /// Values with |Delta| above this are dropped from that S's statistics;
  /// unset keeps all.
  std::optional<double> outlier_threshold = 60.0;
};

/// Delta(U) for one random circuit at every S in config.S_values. alpha is
/// fitted on an independent training set of size alpha_training_size drawn
/// from the same distribution (same kept rotations).
std::vector<double> delta_for_circuit(const DeltaScalingConfig& config, const Observable& obs,
                                      const RngStream& rng);

struct DeltaScalingRow {
  std::size_t S = 0;
  double mean_abs = 0.0;
  double std_abs = 0.0;
  std::size_t count = 0;
  std::size_t removed = 0;
};

/// Mean and standard deviation of |Delta(U)| over config.circuits circuits per
/// S. Circuit c uses stream rng.child(c).
std::vector<DeltaScalingRow> delta_scaling(const DeltaScalingConfig& config, const Observable& obs,
                                           const RngStream& rng, std::size_t workers = 1);

/// Least-squares slope of log(y) against log(x).
double power_law_exponent(const std::vector<double>& x, const std::vector<double>& y);

/// Columns parameter,mean,std,count.
void write_delta_csv(std::ostream& out, const std::vector<DeltaScalingRow>& rows);

/// Monte-Carlo mean of N(theta) over `draws` vectors of ell_r uniform angles.
double monte_carlo_ntheta(std::size_t ell_r, std::size_t draws, const RngStream& rng);

}  // namespace cdr
