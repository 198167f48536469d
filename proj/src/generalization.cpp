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

#include "cdr/generalization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cdr/branches.hpp"
#include "cdr/parallel.hpp"
#include "cdr/regression.hpp"
#include "cdr/simulator.hpp"

namespace cdr {

std::vector<std::vector<double>> exact_training_features(const TrainingSet& ts,
                                                         const FeatureMapSpec& spec,
                                                         const NoiseModel& noise,
                                                         const Observable& obs) {
  std::vector<std::vector<double>> rows;
  rows.reserve(ts.size());
  const RngStream unused(0);
  for (const auto& p : ts.pairs) {
    OutcomeCache cache(p.circuit, noise, obs, spec.insertion);
    rows.push_back(feature_vector(cache, spec, std::nullopt, unused));
  }
  return rows;
}

namespace {

double dot(const Eigen::VectorXd& alpha, const std::vector<double>& phi) {
  if (static_cast<std::size_t>(alpha.size()) != phi.size()) {
    throw std::invalid_argument("alpha and feature dimensions differ");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) s += alpha(static_cast<Eigen::Index>(j)) * phi[j];
  return s;
}

}  // namespace

GapTerms generalization_gap(const TrainingSet& ts, const std::vector<std::vector<double>>& features,
                            const Eigen::VectorXd& alpha, double f_u,
                            const std::vector<double>& phi_u) {
  if (ts.size() == 0 || features.size() != ts.size()) {
    throw std::invalid_argument("need one feature row per training circuit");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    acc += ts.pairs[i].sign * (ts.pairs[i].f - dot(alpha, features[i]));
  }
  GapTerms g;
  g.n_theta = ts.n_theta;
  g.training_term = std::abs(ts.n_theta * acc / static_cast<double>(ts.size()));
  g.true_residual = std::abs(f_u - dot(alpha, phi_u));
  return g;
}

Eigen::VectorXd fit_exact_alpha(const TrainingSet& ts, const FeatureMapSpec& spec,
                                const NoiseModel& noise, const Observable& obs, double mu) {
  const auto rows = exact_training_features(ts, spec, noise, obs);
  FeatureMatrix fm(ts.size(), spec.dimension());
  for (std::size_t i = 0; i < ts.size(); ++i) fm.set_row(i, rows[i], ts.pairs[i].f);
  return fit_ridge(fm, mu, obs.spectral_norm()).alpha;
}

std::vector<double> delta_for_circuit(const DeltaScalingConfig& config, const Observable& obs,
                                      const RngStream& rng) {
  const Circuit u = random_circuit(config.n, config.ell, rng.child(0), config.min_cnots);
  const std::size_t n_fixed = std::min(config.n_fixed, u.rotation_indices().size());
  const auto fixed = choose_fixed_rotations(u, n_fixed, rng.child(1));

  const TrainingSet alpha_set =
      generate_training_set(u, config.alpha_training_size, fixed, rng.child(2), obs);
  const Eigen::VectorXd alpha = fit_exact_alpha(alpha_set, config.spec, config.noise, obs, config.mu);

  OutcomeCache cache(u, config.noise, obs, config.spec.insertion);
  const std::vector<double> phi_u = feature_vector(cache, config.spec, std::nullopt, rng);
  const double f_u = noiseless_expectation(u, obs);

  std::vector<double> deltas;
  deltas.reserve(config.S_values.size());
  for (std::size_t k = 0; k < config.S_values.size(); ++k) {
    const TrainingSet ts = generate_training_set(u, config.S_values[k], fixed, rng.child(3).child(k), obs);
    const auto rows = exact_training_features(ts, config.spec, config.noise, obs);
    deltas.push_back(generalization_gap(ts, rows, alpha, f_u, phi_u).delta());
  }
  return deltas;
}

std::vector<DeltaScalingRow> delta_scaling(const DeltaScalingConfig& config, const Observable& obs,
                                           const RngStream& rng, std::size_t workers) {
  if (config.S_values.empty()) throw std::invalid_argument("need at least one S value");
  const auto per_circuit = parallel_map(config.circuits, workers, [&](std::size_t c) {
    return delta_for_circuit(config, obs, rng.child(c));
  });
  std::vector<DeltaScalingRow> rows;
  for (std::size_t k = 0; k < config.S_values.size(); ++k) {
    DeltaScalingRow row;
    row.S = config.S_values[k];
    std::vector<double> kept;
    for (const auto& d : per_circuit) {
      const double a = std::abs(d[k]);
      if (config.outlier_threshold && a > *config.outlier_threshold) {
        ++row.removed;
      } else {
        kept.push_back(a);
      }
    }
    row.count = kept.size();
    if (!kept.empty()) {
      double s = 0.0;
      for (double a : kept) s += a;
      row.mean_abs = s / static_cast<double>(kept.size());
      double v = 0.0;
      for (double a : kept) v += (a - row.mean_abs) * (a - row.mean_abs);
      row.std_abs = kept.size() > 1 ? std::sqrt(v / static_cast<double>(kept.size() - 1)) : 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

double power_law_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need two or more points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("power-law fit needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("x values must differ");
  return sxy / sxx;
}

void write_delta_csv(std::ostream& out, const std::vector<DeltaScalingRow>& rows) {
  const auto old_precision = out.precision(17);
  out << "parameter,mean,std,count\n";
  for (const auto& r : rows) out << r.S << ',' << r.mean_abs << ',' << r.std_abs << ',' << r.count << '\n';
  out.precision(old_precision);
}

double monte_carlo_ntheta(std::size_t ell_r, std::size_t draws, const RngStream& rng) {
  if (draws == 0) throw std::invalid_argument("need at least one draw");
  auto eng = rng.engine();
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double acc = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    double n = 1.0;
    for (std::size_t r = 0; r < ell_r; ++r) n *= rotation_coefficients(angle(eng)).l1_norm();
    acc += n;
  }
  return acc / static_cast<double>(draws);
}

}  // namespace cdr
