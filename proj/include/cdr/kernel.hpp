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

#include <Eigen/Dense>

#include "cdr/circuit.hpp"
#include "cdr/feature_map.hpp"
#include "cdr/noise.hpp"
#include "cdr/observable.hpp"
#include "cdr/rng.hpp"
#include "cdr/training.hpp"

namespace cdr {

/// Kernel matrix over the training circuits and kernel vector against U.
struct KernelSystem {
  Eigen::MatrixXd K;
  Eigen::VectorXd k;
  Eigen::VectorXd f;
};

/// Builds K_ij = kappa(W_i, W_j) and k_i = kappa(W_i, U).
///
/// Exact mode uses kappa(W, W') = phi(W)^T phi(W'). With `shots` = N, the
/// non-constant part sum_j phi_j(W) phi_j(W') is estimated as J times the mean
/// of N products x * y, where each draw picks a perturbation j uniformly and
/// x, y are independent single-shot outcomes of P_j(W) and P_j(W').
KernelSystem kernel_system(const TrainingSet& ts, const FeatureMapSpec& spec,
                           const NoiseModel& noise, const Observable& obs, const Circuit& u,
                           Shots shots, const RngStream& rng);

/// f^T (K + mu I)^{-1} k, unclipped. Throws NumericError if K + mu I cannot be
/// factorized.
double kernel_predict(const KernelSystem& sys, double mu);

/// kernel_predict(kernel_system(...), mu).
double kernel_estimate(const TrainingSet& ts, const FeatureMapSpec& spec, const NoiseModel& noise,
                       const Observable& obs, double mu, const Circuit& u, Shots shots,
                       const RngStream& rng);

}  // namespace cdr
