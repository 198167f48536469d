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
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cdr {

/// Thrown when a linear system is singular or too ill-conditioned to solve.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Training features, one row per circuit; column 0 is the constant 1.
struct FeatureMatrix {
  Eigen::MatrixXd phi;
  Eigen::VectorXd f;
  std::vector<std::string> column_names;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t dim);

  std::size_t rows() const { return static_cast<std::size_t>(phi.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(phi.cols()); }
  void set_row(std::size_t i, std::span<const double> features, double target);

  /// Header "f,<column names...>" then one row per circuit.
  void write_csv(std::ostream& out) const;
};

struct RegressionModel {
  Eigen::VectorXd alpha;
  double mu = 0.0;
  double obs_norm = 1.0;

  /// alpha^T phi, unclipped.
  double raw_predict(std::span<const double> features) const;
  /// alpha^T phi clipped to [-obs_norm, obs_norm].
  double predict(std::span<const double> features) const;
};

/// Largest condition number accepted for an unregularized (mu = 0) fit.
inline constexpr double kMaxConditionNumber = 1e12;

/// alpha = (Phi^T Phi + mu I)^{-1} Phi^T f. mu must be >= 0; mu = 0 requires
/// Phi^T Phi to have condition number below kMaxConditionNumber, otherwise
/// NumericError.
RegressionModel fit_ridge(const FeatureMatrix& fm, double mu, double obs_norm = 1.0);

/// sqrt(mean((p - t)^2)); std::invalid_argument on empty or mismatched input.
double rmse(std::span<const double> predictions, std::span<const double> truths);

/// Paired bootstrap of rmse(a, truth) - rmse(b, truth): each of `resamples`
/// draws resamples circuit indices with replacement and evaluates both errors
/// on the same indices.
std::vector<double> paired_bootstrap_rmse_difference(std::span<const double> a,
                                                     std::span<const double> b,
                                                     std::span<const double> truth,
                                                     std::size_t resamples, std::uint64_t seed);

}  // namespace cdr
