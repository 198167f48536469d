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

#include "cdr/regression.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cdr {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t dim)
    : phi(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim))),
      f(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows))) {
  column_names.reserve(dim);
  column_names.emplace_back("one");
  for (std::size_t j = 1; j < dim; ++j) column_names.push_back("phi" + std::to_string(j));
}

void FeatureMatrix::set_row(std::size_t i, std::span<const double> features, double target) {
  if (features.size() != dimension()) throw std::invalid_argument("feature dimension mismatch");
  if (i >= rows()) throw std::out_of_range("feature row out of range");
  for (std::size_t j = 0; j < features.size(); ++j) {
    phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = features[j];
  }
  f(static_cast<Eigen::Index>(i)) = target;
}

void FeatureMatrix::write_csv(std::ostream& out) const {
  out << "f";
  for (const auto& name : column_names) out << ',' << name;
  out << '\n';
  const auto old_precision = out.precision(17);
  for (Eigen::Index i = 0; i < phi.rows(); ++i) {
    out << f(i);
    for (Eigen::Index j = 0; j < phi.cols(); ++j) out << ',' << phi(i, j);
    out << '\n';
  }
  out.precision(old_precision);
}

double RegressionModel::raw_predict(std::span<const double> features) const {
  if (features.size() != static_cast<std::size_t>(alpha.size())) {
    throw std::invalid_argument("feature dimension does not match the model");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < features.size(); ++j) s += alpha(static_cast<Eigen::Index>(j)) * features[j];
  return s;
}

double RegressionModel::predict(std::span<const double> features) const {
  return std::clamp(raw_predict(features), -obs_norm, obs_norm);
}

RegressionModel fit_ridge(const FeatureMatrix& fm, double mu, double obs_norm) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be finite and >= 0");
  if (fm.rows() == 0) throw std::invalid_argument("cannot fit on an empty training set");
  const Eigen::MatrixXd gram = fm.phi.transpose() * fm.phi;
  const Eigen::VectorXd rhs = fm.phi.transpose() * fm.f;
  if (mu == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo >= kMaxConditionNumber) {
      throw NumericError("normal equations are singular or ill-conditioned at mu = 0");
    }
  }
  Eigen::MatrixXd a = gram;
  a.diagonal().array() += mu;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw NumericError("ridge system factorization failed");
  Eigen::VectorXd alpha = ldlt.solve(rhs);
  // One step of iterative refinement tightens the residual on near-singular
  // systems with tiny mu.
  alpha += ldlt.solve(rhs - a * alpha);
  if (!alpha.allFinite()) throw NumericError("ridge solution is not finite");
  return {alpha, mu, obs_norm};
}

double rmse(std::span<const double> predictions, std::span<const double> truths) {
  if (predictions.empty()) throw std::invalid_argument("rmse of an empty set");
  if (predictions.size() != truths.size()) throw std::invalid_argument("rmse length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - truths[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(predictions.size()));
}

std::vector<double> paired_bootstrap_rmse_difference(std::span<const double> a,
                                                     std::span<const double> b,
                                                     std::span<const double> truth,
                                                     std::size_t resamples, std::uint64_t seed) {
  const std::size_t n = truth.size();
  if (n == 0 || a.size() != n || b.size() != n) {
    throw std::invalid_argument("bootstrap inputs must be non-empty and equally long");
  }
  std::mt19937_64 eng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> out;
  out.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = pick(eng);
      sa += (a[k] - truth[k]) * (a[k] - truth[k]);
      sb += (b[k] - truth[k]) * (b[k] - truth[k]);
    }
    out.push_back(std::sqrt(sa / static_cast<double>(n)) - std::sqrt(sb / static_cast<double>(n)));
  }
  return out;
}

}  // namespace cdr
