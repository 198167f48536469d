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

#include "cdr/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cdr {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

BoundReport BoundReport::make(std::string name, double lhs, double rhs, nlohmann::json parameters) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.holds = lhs <= rhs + kBoundTolerance;
  r.parameters = std::move(parameters);
  return r;
}

nlohmann::json to_json(const BoundReport& r) {
  return {{"name", r.name},   {"lhs", r.lhs},     {"rhs", r.rhs},
          {"holds", r.holds}, {"slack", r.slack}, {"parameters", r.parameters}};
}

double fourier_approximation_constant() { return 3.0 * std::sqrt(1.0 + 4.0 * kPi * kPi / 3.0); }

double fourier_approximation_bound(unsigned p, std::size_t Q, double t, double obs_norm) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (Q == 0) throw std::invalid_argument("Q must be at least 1");
  const double pd = static_cast<double>(p);
  if (!(t >= 0.0 && t <= pd / 4.0)) throw std::invalid_argument("t must lie in [0, p/4]");
  const double truncation =
      Q < p ? fourier_approximation_constant() * pd / static_cast<double>(Q) : 0.0;
  return 2.0 * obs_norm * (truncation + std::sin(2.0 * kPi * t / pd));
}

BoundReport verify_fourier_approximation(const Eigen::MatrixXcd& u, const Observable& obs,
                                         unsigned p, std::size_t Q,
                                         const std::vector<double>& t_grid) {
  const UnitarySpectrum spec_u(u);
  const UnitarySpectrum spec_y = periodic_approximant(spec_u, p);
  const double period = static_cast<double>(p);
  const std::size_t samples = 4 * static_cast<std::size_t>(p);
  std::vector<double> ts(samples);
  std::vector<double> ys(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    ts[k] = period * static_cast<double>(k) / static_cast<double>(samples);
    ys[k] = g_of_t(spec_y, obs, ts[k]);
  }
  // g(t, Y) only contains frequencies q / p with |q| <= p - 1.
  const std::size_t order = std::min<std::size_t>(Q, p - 1);
  const FourierModel model = fit_fourier(ts, ys, period, order);

  double best_slack = std::numeric_limits<double>::infinity();
  double lhs_at = 0.0;
  double rhs_at = 0.0;
  double t_at = 0.0;
  double max_error = 0.0;
  for (double t : t_grid) {
    const double err = std::abs(g_of_t(spec_u, obs, t) - model(t));
    const double bound = fourier_approximation_bound(p, Q, t, obs.spectral_norm());
    max_error = std::max(max_error, err);
    if (bound - err < best_slack) {
      best_slack = bound - err;
      lhs_at = err;
      rhs_at = bound;
      t_at = t;
    }
  }
  return BoundReport::make("fourier_approximation", lhs_at, rhs_at,
                           {{"p", p}, {"Q", Q}, {"order", order}, {"t", t_at},
                            {"max_error", max_error}, {"grid_points", t_grid.size()}});
}

BoundReport verify_periodic_approximant(const Eigen::MatrixXcd& u, unsigned p,
                                        const std::vector<double>& t_grid,
                                        const std::vector<Eigen::VectorXcd>& states) {
  const UnitarySpectrum spec_u(u);
  const UnitarySpectrum spec_y = periodic_approximant(spec_u, p);
  std::vector<Eigen::VectorXcd> psis;
  psis.push_back(Eigen::VectorXcd::Unit(u.rows(), 0));
  for (const auto& s : states) {
    if (s.size() != u.rows()) throw std::invalid_argument("state dimension mismatch");
    psis.push_back(s);
  }
  const double pd = static_cast<double>(p);
  double best_slack = std::numeric_limits<double>::infinity();
  double lhs_at = 0.0;
  double rhs_at = 0.0;
  double t_at = 0.0;
  for (double t : t_grid) {
    if (!(t >= 0.0 && t <= pd / 4.0)) throw std::invalid_argument("t must lie in [0, p/4]");
    const double bound = 2.0 * std::sin(2.0 * kPi * t / pd);
    for (const auto& psi : psis) {
      const double d = pure_trace_distance(spec_u.apply_power(t, psi), spec_y.apply_power(t, psi));
      if (bound - d < best_slack) {
        best_slack = bound - d;
        lhs_at = d;
        rhs_at = bound;
        t_at = t;
      }
    }
  }
  return BoundReport::make("periodic_approximant", lhs_at, rhs_at,
                           {{"p", p}, {"t", t_at}, {"states", psis.size()}, {"grid_points", t_grid.size()}});
}

double lipschitz_constant_factor() {
  return std::sqrt(4.0 * kPi * kPi + 16.0 * std::pow(kPi, 4) / 3.0);
}

double lipschitz_bound(double obs_norm) { return 2.0 * obs_norm * lipschitz_constant_factor(); }

BoundReport verify_lipschitz(const Eigen::MatrixXcd& u, const Observable& obs, std::size_t trials,
                             const RngStream& rng, double t_max) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  const UnitarySpectrum spec(u);
  auto eng = rng.engine();
  std::uniform_real_distribution<double> unif(0.0, t_max);
  double worst = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    const double t1 = unif(eng);
    const double t2 = unif(eng);
    if (t1 == t2) continue;
    const double ratio = std::abs(g_of_t(spec, obs, t1) - g_of_t(spec, obs, t2)) / std::abs(t1 - t2);
    worst = std::max(worst, ratio);
  }
  return BoundReport::make("lipschitz", worst, lipschitz_bound(obs.spectral_norm()),
                           {{"trials", trials}, {"t_max", t_max}});
}

double expected_error_bound(const Eigen::VectorXd& alpha, double obs_norm, std::size_t shots,
                            double residual) {
  if (shots == 0) throw std::invalid_argument("need at least one shot");
  return alpha.norm() * obs_norm / std::sqrt(static_cast<double>(shots)) + residual;
}

double generalization_bound_rhs(const std::vector<double>& training_abs_residuals,
                                double alpha_norm, double obs_norm, std::size_t J, std::size_t S,
                                double delta, double n_theta) {
  if (S == 0) throw std::invalid_argument("S must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (obs_norm < 1.0) throw std::invalid_argument("the bound requires ||O|| >= 1");
  if (alpha_norm < 0.0) throw std::invalid_argument("alpha norm must be non-negative");
  double residual_sum = 0.0;
  for (double r : training_abs_residuals) residual_sum += std::abs(r);
  const double sd = static_cast<double>(S);
  const double a = std::max(1.0, std::ceil(alpha_norm));
  const double complexity = a * obs_norm * n_theta * std::sqrt(static_cast<double>(J) + 1.0) /
                            std::sqrt(sd) *
                            (2.0 + std::sqrt(72.0 * std::log(8.0 * a * a / delta)));
  return n_theta / sd * residual_sum + complexity;
}

std::pair<double, double> expected_ntheta_bounds(std::size_t ell_r) {
  const double l = static_cast<double>(ell_r);
  return {std::pow(3.0 * (0.25 + 1.0 / kPi), l), std::pow(6.0 / kPi, l)};
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double sample_complexity_lower_bound(double M, double p_eps, double beta, std::size_t n, double p,
                                     LowerBoundVariant variant) {
  if (!(M >= 2.0)) throw std::invalid_argument("M must be at least 2");
  if (!(p_eps >= 0.0 && p_eps <= 1.0)) throw std::invalid_argument("P_eps must lie in [0, 1]");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0, 1)");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (p == 1.0) throw std::domain_error("bound is vacuous at p = 1 (division by zero)");
  const double numerator = (1.0 - p_eps - beta) * std::log2(M) - binary_entropy(p_eps);
  const double exponent = variant.depth == 0 ? 1.0 : 2.0 * static_cast<double>(variant.depth);
  return numerator / (static_cast<double>(n) * std::pow(1.0 - p, exponent));
}

}  // namespace cdr
